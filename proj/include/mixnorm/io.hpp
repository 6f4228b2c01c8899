#pragma once

// JSON interchange for tensors, exponent tuples, polynomials, XOR games and
// campaign reports, plus CSV/text report rendering.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/experiments.hpp"
#include "mixnorm/forms.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm::io {

using Json = nlohmann::ordered_json;

using AnyTensor = std::variant<RealTensor, ComplexTensor>;
using AnyPolynomial = std::variant<HomogeneousPolynomial<double>, HomogeneousPolynomial<Complex>>;

enum class Format { json, csv, text };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw DomainError("unknown format '" + std::string(s) + "' (json, csv, text)");
}

/// %.17g: enough digits to round-trip any double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Parses JSON text; syntax errors carry the source name and byte offset.
inline Json parse_json(std::string_view text, const std::string& source = "<input>") {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw SchemaError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path, "missing key \"" + key + "\"");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

inline std::size_t positive_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) schema_fail(path, "expected a positive integer");
  return j.get<std::size_t>();
}

inline int nonnegative_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema_fail(path, "expected a non-negative integer");
  return j.get<int>();
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  return j;
}

template <class Fn>
auto rethrow_as_schema(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    schema_fail(path, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tensors: {"shape":[...], "field":"real"|"complex", "data":[...]}, row-major,
// complex data interleaved as re, im.

template <Scalar S>
Json tensor_to_json(const Tensor<S>& t) {
  Json j;
  j["shape"] = t.shape();
  j["field"] = to_string(field_of<S>);
  Json data = Json::array();
  for (const auto& x : t.data()) {
    if constexpr (is_complex_v<S>) {
      data.push_back(x.real());
      data.push_back(x.imag());
    } else {
      data.push_back(x);
    }
  }
  j["data"] = std::move(data);
  return j;
}

inline AnyTensor tensor_from_json(const Json& j, const std::string& path = "$") {
  const auto& shape_j = detail::array(detail::member(j, "shape", path), path + ".shape");
  Shape shape;
  for (std::size_t i = 0; i < shape_j.size(); ++i)
    shape.push_back(detail::positive_integer(shape_j[i], path + ".shape[" + std::to_string(i) + "]"));
  if (shape.empty()) detail::schema_fail(path + ".shape", "a tensor needs at least one axis");
  const auto& field_j = detail::member(j, "field", path);
  if (!field_j.is_string()) detail::schema_fail(path + ".field", "expected \"real\" or \"complex\"");
  const auto field = field_j.get<std::string>();
  const auto& data_j = detail::array(detail::member(j, "data", path), path + ".data");
  const std::size_t size = mixnorm::detail::shape_size(shape);
  auto at = [&](std::size_t i) { return detail::number(data_j[i], path + ".data[" + std::to_string(i) + "]"); };
  if (field == "real") {
    if (data_j.size() != size)
      detail::schema_fail(path + ".data", "expected " + std::to_string(size) + " entries, got " +
                                              std::to_string(data_j.size()));
    std::vector<double> data(size);
    for (std::size_t i = 0; i < size; ++i) data[i] = at(i);
    return detail::rethrow_as_schema(path, [&] { return AnyTensor(RealTensor(shape, std::move(data))); });
  }
  if (field == "complex") {
    if (data_j.size() != 2 * size)
      detail::schema_fail(path + ".data", "expected " + std::to_string(2 * size) + " numbers (re, im pairs), got " +
                                              std::to_string(data_j.size()));
    std::vector<Complex> data(size);
    for (std::size_t i = 0; i < size; ++i) data[i] = {at(2 * i), at(2 * i + 1)};
    return detail::rethrow_as_schema(path, [&] { return AnyTensor(ComplexTensor(shape, std::move(data))); });
  }
  detail::schema_fail(path + ".field", "expected \"real\" or \"complex\", got \"" + field + "\"");
}

inline Json tensor_to_json(const AnyTensor& t) {
  return std::visit([](const auto& x) { return tensor_to_json(x); }, t);
}

// ---------------------------------------------------------------------------
// Exponent tuples: [2, 1.5, "inf"]

inline Json exponent_to_json(const Exponent& e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

inline Json exponents_to_json(const ExponentTuple& q) {
  Json j = Json::array();
  for (const auto& e : q) j.push_back(exponent_to_json(e));
  return j;
}

inline Exponent exponent_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity" || s == "infinity") return Exponent::infinity();
    detail::schema_fail(path, "expected a number or \"inf\"");
  }
  const double v = detail::number(j, path);
  if (!(v > 0.0)) detail::schema_fail(path, "exponents must be positive");
  if (std::isinf(v)) return Exponent::infinity();
  return Exponent(v);
}

inline ExponentTuple exponents_from_json(const Json& j, const std::string& path = "$") {
  detail::array(j, path);
  ExponentTuple q;
  for (std::size_t i = 0; i < j.size(); ++i) q.push_back(exponent_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return q;
}

// ---------------------------------------------------------------------------
// Polynomials: {"degree":m, "nvars":n, "terms":[{"alpha":[...], "re":x, "im":y}]}

template <Scalar S>
Json polynomial_to_json(const HomogeneousPolynomial<S>& p) {
  Json j;
  j["degree"] = p.degree();
  j["nvars"] = p.nvars();
  Json terms = Json::array();
  for (const auto& [alpha, a] : p.terms()) {
    Json t;
    t["alpha"] = alpha;
    if constexpr (is_complex_v<S>) {
      t["re"] = a.real();
      t["im"] = a.imag();
    } else {
      t["re"] = a;
      t["im"] = 0.0;
    }
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

/// Real when every term has a zero (or missing) imaginary part.
inline AnyPolynomial polynomial_from_json(const Json& j, const std::string& path = "$") {
  const int degree = detail::nonnegative_int(detail::member(j, "degree", path), path + ".degree");
  const int nvars = static_cast<int>(detail::positive_integer(detail::member(j, "nvars", path), path + ".nvars"));
  const auto& terms = detail::array(detail::member(j, "terms", path), path + ".terms");
  struct Term {
    MultiIndex alpha;
    double re, im;
  };
  std::vector<Term> parsed;
  bool complex = false;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto tp = path + ".terms[" + std::to_string(k) + "]";
    const auto& alpha_j = detail::array(detail::member(terms[k], "alpha", tp), tp + ".alpha");
    Term t;
    for (std::size_t i = 0; i < alpha_j.size(); ++i)
      t.alpha.push_back(detail::nonnegative_int(alpha_j[i], tp + ".alpha[" + std::to_string(i) + "]"));
    t.re = detail::number(detail::member(terms[k], "re", tp), tp + ".re");
    t.im = terms[k].contains("im") ? detail::number(terms[k]["im"], tp + ".im") : 0.0;
    complex = complex || t.im != 0.0;
    parsed.push_back(std::move(t));
  }
  return detail::rethrow_as_schema(path, [&]() -> AnyPolynomial {
    if (complex) {
      HomogeneousPolynomial<Complex> p(degree, nvars);
      for (const auto& t : parsed) p.add_term(t.alpha, Complex(t.re, t.im));
      return p;
    }
    HomogeneousPolynomial<double> p(degree, nvars);
    for (const auto& t : parsed) p.add_term(t.alpha, t.re);
    return p;
  });
}

// ---------------------------------------------------------------------------
// XOR games: {"m":…, "n":…, "pi": tensor, "signs": tensor}

inline Json game_to_json(const XorGame& g) {
  Json j;
  j["m"] = g.players();
  j["n"] = g.questions();
  j["pi"] = tensor_to_json(g.pi());
  j["signs"] = tensor_to_json(g.signs());
  return j;
}

inline XorGame game_from_json(const Json& j, const std::string& path = "$") {
  const auto m = detail::positive_integer(detail::member(j, "m", path), path + ".m");
  const auto n = detail::positive_integer(detail::member(j, "n", path), path + ".n");
  auto real = [&](const char* key) {
    const auto sub = path + "." + key;
    auto t = tensor_from_json(detail::member(j, key, path), sub);
    if (!std::holds_alternative<RealTensor>(t)) detail::schema_fail(sub, "expected a real tensor");
    auto r = std::get<RealTensor>(std::move(t));
    if (r.shape() != Shape(m, n))
      detail::schema_fail(sub, "shape " + mixnorm::detail::shape_string(r.shape()) + " does not match m=" +
                                   std::to_string(m) + ", n=" + std::to_string(n));
    return r;
  };
  auto pi = real("pi");
  auto signs = real("signs");
  return detail::rethrow_as_schema(path, [&] { return XorGame(std::move(pi), std::move(signs)); });
}

// ---------------------------------------------------------------------------
// Reports

inline Json violations_to_json(const std::vector<Violation>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(Json{{"trial", x.trial}, {"ratio", x.ratio}});
  return a;
}

/// Stable key order; elapsed time is deliberately left out so that reruns
/// print identical JSON.
inline Json report_to_json(const VerificationReport& r) {
  Json j;
  j["campaign"] = r.campaign;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["tolerance"] = r.tolerance;
  j["constant"] = r.constant;
  j["max_ratio"] = r.max_ratio;
  j["max_statistic"] = r.max_statistic;
  j["violations"] = violations_to_json(r.violations);
  j["flagged"] = violations_to_json(r.flagged);
  j["passed"] = r.passed();
  return j;
}

inline VerificationReport report_from_json(const Json& j, const std::string& path = "$") {
  VerificationReport r;
  const auto& name = detail::member(j, "campaign", path);
  if (!name.is_string()) detail::schema_fail(path + ".campaign", "expected a string");
  r.campaign = name.get<std::string>();
  const auto& seed = detail::member(j, "seed", path);
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    detail::schema_fail(path + ".seed", "expected a non-negative integer");
  r.seed = seed.get<std::uint64_t>();
  r.trials = detail::positive_integer(detail::member(j, "trials", path), path + ".trials");
  r.tolerance = detail::number(detail::member(j, "tolerance", path), path + ".tolerance");
  r.constant = detail::number(detail::member(j, "constant", path), path + ".constant");
  r.max_ratio = detail::number(detail::member(j, "max_ratio", path), path + ".max_ratio");
  r.max_statistic = detail::number(detail::member(j, "max_statistic", path), path + ".max_statistic");
  auto list = [&](const char* key) {
    std::vector<Violation> out;
    const auto sub = path + "." + key;
    const auto& a = detail::array(detail::member(j, key, path), sub);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto ip = sub + "[" + std::to_string(i) + "]";
      const auto& trial = detail::member(a[i], "trial", ip);
      if (!trial.is_number_integer() || trial.get<long long>() < 0)
        detail::schema_fail(ip + ".trial", "expected a non-negative integer");
      out.push_back({trial.get<std::size_t>(), detail::number(detail::member(a[i], "ratio", ip), ip + ".ratio")});
    }
    return out;
  };
  r.violations = list("violations");
  r.flagged = list("flagged");
  return r;
}

/// Fixed CSV header for reports. One row per violation, one per flagged
/// trial, then a summary row whose `ratio` is the campaign maximum.
inline constexpr std::string_view kReportCsvHeader = "campaign,seed,trials,tolerance,constant,kind,trial,ratio";

inline std::string elapsed_line(double seconds) { return "# elapsed_s: " + format_double(seconds) + "\n"; }

inline std::string emit_report(const VerificationReport& r, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::json:
      out << report_to_json(r).dump(2) << "\n";
      break;
    case Format::csv: {
      out << kReportCsvHeader << "\n";
      const auto prefix = r.campaign + "," + std::to_string(r.seed) + "," + std::to_string(r.trials) + "," +
                          format_double(r.tolerance) + "," + format_double(r.constant) + ",";
      for (const auto& v : r.violations)
        out << prefix << "violation," << v.trial << "," << format_double(v.ratio) << "\n";
      for (const auto& v : r.flagged) out << prefix << "flagged," << v.trial << "," << format_double(v.ratio) << "\n";
      out << prefix << "summary,," << format_double(r.max_ratio) << "\n";
      break;
    }
    case Format::text:
      out << "campaign:      " << r.campaign << "\n"
          << "seed:          " << r.seed << "\n"
          << "trials:        " << r.trials << "\n"
          << "tolerance:     " << format_double(r.tolerance) << "\n"
          << "constant:      " << format_double(r.constant) << "\n"
          << "max_ratio:     " << format_double(r.max_ratio) << "\n"
          << "max_statistic: " << format_double(r.max_statistic) << "\n"
          << "violations:    " << r.violations.size() << "\n"
          << "flagged:       " << r.flagged.size() << "\n";
      for (const auto& v : r.violations) out << "  violation trial " << v.trial << " ratio " << format_double(v.ratio) << "\n";
      for (const auto& v : r.flagged) out << "  flagged trial " << v.trial << " ratio " << format_double(v.ratio) << "\n";
      out << "status:        " << (r.passed() ? "pass" : (r.violations.empty() ? "flagged" : "violations")) << "\n"
          << "rerun with:    --seed " << r.seed << " --trials " << r.trials << "\n";
      break;
  }
  out << elapsed_line(r.elapsed_seconds);
  return out.str();
}

/// Reads the JSON form written by emit_report; trailing '#' lines are
/// skipped and an elapsed line, if present, is restored.
inline VerificationReport read_report(std::string_view text, const std::string& source = "<report>") {
  std::string body;
  double elapsed = 0.0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("#", 0) == 0) {
      constexpr std::string_view tag = "# elapsed_s: ";
      if (line.rfind(tag, 0) == 0) elapsed = std::strtod(line.c_str() + tag.size(), nullptr);
      body += std::string(line.size(), ' ') + "\n";  // keep byte offsets meaningful
      continue;
    }
    body += line;
    body += "\n";
  }
  auto r = report_from_json(parse_json(body, source));
  r.elapsed_seconds = elapsed;
  return r;
}

}  // namespace mixnorm::io
