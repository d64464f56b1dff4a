#include "sgm/medium.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "sgm/errors.hpp"

namespace sgm {

ComplexIndex ComplexIndex::make(double eta, LogReal kappa) {
  if (!(eta > 1.0)) throw DomainError(fmt::format("refractive index: eta = {} must exceed 1", eta));
  if (!kappa.is_zero() && kappa.log10_abs() >= -1.0)
    throw DomainError("refractive index: |kappa| = " + kappa.abs().to_string() +
                      " outside the weak-gain regime |kappa| < 0.1");
  return {eta, kappa};
}

double size_parameter(double lambda_nm, double radius_um) {
  if (!(lambda_nm > 0.0)) throw DomainError("wavelength must be positive");
  return 2.0 * std::numbers::pi * radius_um * kNmPerUm / lambda_nm;
}

double wavelength_from_size(double x, double radius_um) {
  if (!(x > 0.0)) throw DomainError("size parameter must be positive");
  return 2.0 * std::numbers::pi * radius_um * kNmPerUm / x;
}

LogReal kappa_from_gain(double lambda_nm, const LogReal& gain_per_cm) {
  if (!(lambda_nm > 0.0)) throw DomainError("kappa_from_gain: wavelength must be positive");
  return -(gain_per_cm * LogReal::from_double(lambda_nm / kNmPerCm / (4.0 * std::numbers::pi)));
}

LogReal gain_from_kappa(double lambda_nm, const LogReal& kappa) {
  if (!(lambda_nm > 0.0)) throw DomainError("gain_from_kappa: wavelength must be positive");
  return -(kappa * LogReal::from_double(4.0 * std::numbers::pi / (lambda_nm / kNmPerCm)));
}

namespace {
double denominator(double w, double gh) {
  const double a = 1.0 - w * w;
  return a * a + gh * gh * w * w;
}
}  // namespace

double dispersion_f1(double w, double gh) { return gh * (1.0 - w * w) / denominator(w, gh); }
double dispersion_f2(double w, double gh) { return gh * gh * w / denominator(w, gh); }

double resonance_kappa(const GainMaterial& m, double g0_per_cm) {
  return -m.lambda0_nm / kNmPerCm * g0_per_cm / (4.0 * std::numbers::pi);
}

std::complex<double> dispersive_index_value(const GainMaterial& m, double lambda_nm,
                                            double g0_per_cm, DispersionModel model,
                                            DispersionBand band) {
  if (!(g0_per_cm >= 0.0)) throw DomainError("dispersive_index: g0 must be non-negative");
  if (!(lambda_nm >= band.lower * m.lambda0_nm && lambda_nm <= band.upper * m.lambda0_nm))
    throw DomainError(fmt::format("dispersive_index: lambda = {} nm outside [{}, {}] nm",
                                  lambda_nm, band.lower * m.lambda0_nm,
                                  band.upper * m.lambda0_nm));
  const double w = m.lambda0_nm / lambda_nm;
  const double k0 = resonance_kappa(m, g0_per_cm);
  if (model == DispersionModel::linearized)
    return {m.n0 + k0 * dispersion_f1(w, m.gamma_hat), k0 * dispersion_f2(w, m.gamma_hat)};
  const double wp2 = 2.0 * m.n0 * m.gamma_hat * k0;
  const std::complex<double> eps =
      m.n0 * m.n0 - wp2 / std::complex<double>(w * w - 1.0, m.gamma_hat * w);
  return std::sqrt(eps);
}

ComplexIndex dispersive_index(const GainMaterial& m, double lambda_nm, double g0_per_cm,
                              DispersionModel model, DispersionBand band) {
  const auto n = dispersive_index_value(m, lambda_nm, g0_per_cm, model, band);
  return ComplexIndex::make(n.real(), n.imag());
}

void validate(const GainMaterial& m) {
  if (!(m.n0 > 1.0)) throw ConfigError(fmt::format("material: n0 = {} must exceed 1", m.n0));
  if (!(m.lambda0_nm > 0.0))
    throw ConfigError(fmt::format("material: lambda0_nm = {} must be positive", m.lambda0_nm));
  if (!(m.gamma_hat > 0.0 && m.gamma_hat < 1.0))
    throw ConfigError(fmt::format("material: gamma_hat = {} must lie in (0, 1)", m.gamma_hat));
  if (!(m.g0_max_per_cm >= 0.0))
    throw ConfigError(fmt::format("material: g0_max_per_cm = {} must be non-negative", m.g0_max_per_cm));
}

GainMaterial preset(const std::string& name) {
  if (name == "ndyag") return {1.8217, 808.0, 0.003094, 0.359};
  std::ifstream probe(name);
  if (!probe) throw ConfigError("unknown material preset or unreadable file: " + name);
  return load_material(name);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

constexpr std::array<const char*, 4> kKeys = {"n0", "lambda0_nm", "gamma_hat", "g0_max_per_cm"};

}  // namespace

GainMaterial parse_material(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("material file line {}: expected key = value", lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw ConfigError(fmt::format("material file line {}: unknown key '{}'", lineno, key));
    if (values.count(key)) throw ConfigError(fmt::format("material file: duplicate key '{}'", key));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw.size())
      throw ConfigError(fmt::format("material file line {}: '{}' is not a number", lineno, raw));
    values[key] = v;
  }
  for (const char* k : kKeys)
    if (!values.count(k)) throw ConfigError(fmt::format("material file: missing key '{}'", k));
  GainMaterial m{values["n0"], values["lambda0_nm"], values["gamma_hat"], values["g0_max_per_cm"]};
  validate(m);
  return m;
}

GainMaterial load_material(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open material file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_material(ss.str());
}

std::string format_material(const GainMaterial& m) {
  return fmt::format("n0 = {}\nlambda0_nm = {}\ngamma_hat = {}\ng0_max_per_cm = {}\n", m.n0,
                     m.lambda0_nm, m.gamma_hat, m.g0_max_per_cm);
}

}  // namespace sgm
