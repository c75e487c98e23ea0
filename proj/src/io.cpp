#include "ssaroots/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ssaroots::io {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, field + ": " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a number");
  return j.get<double>();
}

}  // namespace

std::complex<double> complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) invalid(field, "expected [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

Polynomial<double> poly_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected an array of coefficients");
  ComplexVector<double> c(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    c[static_cast<Eigen::Index>(k)] = complex_from_json(j[k], field + "[" + std::to_string(k) + "]");
  return Polynomial<double>(std::move(c));
}

json poly_to_json(const Polynomial<double>& p) {
  json out = json::array();
  for (Eigen::Index k = 0; k < p.coeffs().size(); ++k) out.push_back(complex_to_json(p.coeffs()[k]));
  return out;
}

ModelSpec model_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) invalid(field, "expected an object");
  const bool has_terms = j.contains("terms"), has_real = j.contains("real_terms");
  if (has_terms == has_real) invalid(field, "exactly one of \"terms\" or \"real_terms\" is required");
  for (const auto& [key, _] : j.items())
    if (key != "terms" && key != "real_terms") invalid(field + "." + key, "unknown field");

  ModelSpec spec;
  try {
    if (has_terms) {
      const auto& arr = j.at("terms");
      if (!arr.is_array()) invalid(field + ".terms", "expected an array");
      std::vector<SignalTerm<double>> terms;
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string f = field + ".terms[" + std::to_string(k) + "]";
        if (!arr[k].is_object() || !arr[k].contains("root") || !arr[k].contains("poly"))
          invalid(f, "expected {\"root\": ..., \"poly\": ...}");
        terms.push_back({complex_from_json(arr[k]["root"], f + ".root"), poly_from_json(arr[k]["poly"], f + ".poly")});
      }
      spec.model = SignalModel<double>(std::move(terms));
      return spec;
    }
    const auto& arr = j.at("real_terms");
    if (!arr.is_array()) invalid(field + ".real_terms", "expected an array");
    std::vector<RealTerm<double>> terms;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string f = field + ".real_terms[" + std::to_string(k) + "]";
      if (!arr[k].is_object()) invalid(f, "expected an object");
      RealTerm<double> t;
      for (const auto& [key, value] : arr[k].items()) {
        if (key == "rho") t.rho = number(value, f + ".rho");
        else if (key == "omega") t.omega = number(value, f + ".omega");
        else if (key == "phi") t.phi = number(value, f + ".phi");
        else if (key == "poly") {
          if (!value.is_array()) invalid(f + ".poly", "expected an array of reals");
          t.poly.clear();
          for (const auto& c : value) t.poly.push_back(number(c, f + ".poly"));
        } else {
          invalid(f + "." + key, "unknown field");
        }
      }
      terms.push_back(std::move(t));
    }
    spec.model = real_to_complex(terms);
    spec.real_form = true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid(field, e.what());
  }
  return spec;
}

json model_to_json(const SignalModel<double>& m) {
  json terms = json::array();
  for (const auto& t : m.terms()) terms.push_back({{"root", complex_to_json(t.root)}, {"poly", poly_to_json(t.poly)}});
  return {{"terms", terms}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, path + ": " + e.what());
  }
}

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& out, const TimeSeries<double>& f) {
  out << "n,re,im\n";
  for (Eigen::Index n = 0; n < f.size(); ++n)
    out << n << ',' << format_number(f[n].real()) << ',' << format_number(f[n].imag()) << '\n';
}

TimeSeries<double> read_series_csv(std::istream& in) {
  std::string line;
  std::vector<std::complex<double>> values;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    if (row == 1 && line.rfind("n,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string idx, re, im;
    std::getline(ss, idx, ',');
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    try {
      values.emplace_back(std::stod(re), im.empty() ? 0.0 : std::stod(im));
    } catch (const std::exception&) {
      invalid("series row " + std::to_string(row), "expected n,re,im");
    }
  }
  TimeSeries<double> f(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) f[static_cast<Eigen::Index>(k)] = values[k];
  return f;
}

void write_roots_csv(std::ostream& out, const std::vector<RootRow>& rows) {
  out << "re,im,kind,side,L\n";
  for (const auto& r : rows)
    out << format_number(r.z.real()) << ',' << format_number(r.z.imag()) << ',' << r.kind << ',' << r.side << ','
        << r.window << '\n';
}

}  // namespace ssaroots::io
