// io.hpp — CSV and JSON serialization of spectra and trajectories.
//
// Spectrum CSV: optional '#'-prefixed metadata lines, then the normative
// header "omega,re,im" and one row per grid point, 17 significant digits.
// Spectrum JSON: {"grid":{"delta":..,"half_count":..},"values":[[re,im],..]}.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "qle/linear_coupling.hpp"
#include "qle/spectrum.hpp"

namespace qle {

std::string format_g17(double v);

void write_spectrum_csv(const std::string& path, const ComplexSpectrum& s,
                        const std::vector<std::string>& metadata = {});
ComplexSpectrum read_spectrum_csv(const std::string& path);

nlohmann::json spectrum_to_json(const ComplexSpectrum& s);
ComplexSpectrum spectrum_from_json(const nlohmann::json& j);

/// Regulator table CSV: columns "k,value".
TabulatedRegulator read_regulator_csv(const std::string& path);

} // namespace qle
