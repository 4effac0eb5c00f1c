#include "qle/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qle {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_spectrum_csv(const std::string& path, const ComplexSpectrum& s,
                        const std::vector<std::string>& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& line : metadata) out << "# " << line << "\n";
    out << "omega,re,im\n";
    for (int i = 0; i < s.size(); ++i)
        out << format_g17(s.grid.omega(i)) << ',' << format_g17(s.values[i].real())
            << ',' << format_g17(s.values[i].imag()) << "\n";
}

ComplexSpectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::vector<double> w, re, im;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("omega,re,im", 0) != 0)
                throw std::runtime_error(path + ": expected header omega,re,im");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        double a, b, c;
        char comma;
        if (!(ss >> a >> comma >> b >> comma >> c))
            throw std::runtime_error(path + ": malformed row: " + line);
        w.push_back(a);
        re.push_back(b);
        im.push_back(c);
    }
    const int n = static_cast<int>(w.size());
    if (n < 3 || n % 2 == 0)
        throw std::runtime_error(path + ": spectrum needs an odd number of points");
    const int half = (n - 1) / 2;
    const double delta = w[1] - w[0];
    for (int i = 0; i < n; ++i) {
        const double expect = (i - half) * delta;
        if (std::abs(w[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw std::runtime_error(path + ": grid not uniform/symmetric");
    }
    ComplexSpectrum s;
    s.grid = make_grid(delta, half);
    s.values.resize(n);
    for (int i = 0; i < n; ++i) s.values[i] = cplx(re[i], im[i]);
    return s;
}

nlohmann::json spectrum_to_json(const ComplexSpectrum& s) {
    nlohmann::json j;
    j["grid"] = {{"delta", s.grid.delta}, {"half_count", s.grid.half_count}};
    auto& vals = j["values"] = nlohmann::json::array();
    for (int i = 0; i < s.size(); ++i)
        vals.push_back({s.values[i].real(), s.values[i].imag()});
    return j;
}

ComplexSpectrum spectrum_from_json(const nlohmann::json& j) {
    ComplexSpectrum s;
    s.grid = make_grid(j.at("grid").at("delta").get<double>(),
                       j.at("grid").at("half_count").get<int>());
    const auto& vals = j.at("values");
    if (static_cast<int>(vals.size()) != s.grid.size())
        throw std::runtime_error("spectrum json: value count does not match grid");
    s.values.resize(s.grid.size());
    for (int i = 0; i < s.grid.size(); ++i)
        s.values[i] = cplx(vals[i][0].get<double>(), vals[i][1].get<double>());
    return s;
}

TabulatedRegulator read_regulator_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::vector<double> k, v;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("k,", 0) == 0) continue; // header
        std::istringstream ss(line);
        double a, b;
        char comma;
        if (!(ss >> a >> comma >> b))
            throw std::runtime_error(path + ": malformed row: " + line);
        k.push_back(a);
        v.push_back(b);
    }
    if (k.size() < 2) throw std::runtime_error(path + ": regulator table too small");
    TabulatedRegulator t;
    t.k = Eigen::Map<Eigen::ArrayXd>(k.data(), k.size());
    t.value = Eigen::Map<Eigen::ArrayXd>(v.data(), v.size());
    return t;
}

} // namespace qle
