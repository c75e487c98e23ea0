#ifndef SSAROOTS_IO_HPP
#define SSAROOTS_IO_HPP

///
/// \file io.hpp
///
/// JSON and CSV formats used by the command line tool.
///
///   polynomial   [[re, im], ...] ascending degree (a bare number is a real coefficient)
///   model        {"terms": [{"root": [re, im], "poly": [[re, im], ...]}, ...]}
///                or {"real_terms": [{"rho": r, "omega": w, "phi": p, "poly": [c0, c1, ...]}, ...]}
///   series CSV   n,re,im
///   roots CSV    re,im,kind,side,L
///
/// Malformed input raises Error(ConfigInvalid) naming the offending field.
///

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssaroots/series.hpp"

namespace ssaroots::io {

using json = nlohmann::json;

struct ModelSpec {
  SignalModel<double> model;
  bool real_form = false;  // built from real_terms, so the series is real
};

std::complex<double> complex_from_json(const json& j, const std::string& field);
json complex_to_json(std::complex<double> z);

Polynomial<double> poly_from_json(const json& j, const std::string& field = "poly");
json poly_to_json(const Polynomial<double>& p);

ModelSpec model_from_json(const json& j, const std::string& field = "model");
json model_to_json(const SignalModel<double>& m);

json load_json(const std::string& path);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

void write_series_csv(std::ostream& out, const TimeSeries<double>& f);
TimeSeries<double> read_series_csv(std::istream& in);

struct RootRow {
  std::complex<double> z;
  std::string kind;  // signal, extraneous, separable
  std::string side;  // forward, backward
  int window = 0;
};

void write_roots_csv(std::ostream& out, const std::vector<RootRow>& rows);

}  // namespace ssaroots::io

#endif  // SSAROOTS_IO_HPP
