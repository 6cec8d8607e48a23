#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "remark/core.hpp"
#include "remark/joint_pmf.hpp"
#include "remark/laws.hpp"
#include "remark/sampler.hpp"

// Distribution mini-language and JSON serialisation.
//
//   bin:n:p   po:lambda   negbin:n:q   herm:mu:sigma2
//   multi:n:p1,p2,...   mpo:l1,l2,...   negmulti:n:q1,q2,...
//   mherm:mu1,mu2,...:s11,s12;s21,s22   (mean vector, dispersion-covariance)
//   pmf:@file.json   {"dim": d, "mass": [{"y": [..], "p": ..}, ...]}
//
// A dim-1 pmf file yields a univariate FinitePmf, anything larger a
// JointFinitePmf. Malformed text raises ParseError; well-formed text with
// out-of-range values raises InvalidParameter.

namespace remark::io {

using json = nlohmann::json;
using AnyLaw = std::variant<UnivariateLaw, MultivariateLaw>;

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(std::string_view text, std::string_view field) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError(std::string(field) + ": empty number");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string(field) + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw ParseError(std::string(field) + ": '" + s + "' is not a number");
  return v;
}

inline Count parse_count(std::string_view text, std::string_view field) {
  const std::string s = trim(text);
  Count v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string(field) + ": '" + s + "' is not an integer");
  return v;
}

/// "0.5,0.25" -> {0.5, 0.25}
inline Vector parse_vector(std::string_view text, std::string_view field = "vector") {
  Vector v;
  for (const std::string& tok : split(text, ',')) v.push_back(parse_real(tok, field));
  return v;
}

/// Row-major, rows separated by ';': "0.5,0.25;0.5,0.5".
inline Matrix parse_matrix(std::string_view text, std::string_view field = "matrix") {
  std::vector<Vector> rows;
  for (const std::string& r : split(text, ';')) rows.push_back(parse_vector(r, field));
  for (const Vector& r : rows)
    if (r.size() != rows.front().size())
      throw ParseError(std::string(field) + ": rows have different lengths");
  return Matrix::from_rows(rows);
}

// ---------------------------------------------------------------------------
// JSON

inline JointPmf joint_pmf_from_json(const json& j) {
  try {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    JointPmf::Support s;
    for (const json& e : j.at("mass")) {
      CountVector y = e.at("y").get<CountVector>();
      const double p = e.at("p").get<double>();
      if (!s.emplace(y, p).second) throw ParseError("pmf: duplicate support point");
    }
    const double tail = j.contains("tail_bound") ? j.at("tail_bound").get<double>() : 0.0;
    return JointPmf(dim, std::move(s), tail);
  } catch (const json::exception& e) {
    throw ParseError(std::string("pmf: malformed JSON: ") + e.what());
  }
}

inline json to_json(const JointPmf& p) {
  json mass = json::array();
  for (const auto& [y, pr] : p.mass()) mass.push_back({{"y", y}, {"p", pr}});
  return {{"dim", p.dim()}, {"mass", mass}, {"tail_bound", p.tail_bound()}};
}

inline json to_json(const Matrix& m) { return m.to_rows(); }

inline json to_json(const MomentSummary& s) { return {{"mean", s.mean}, {"disp", to_json(s.disp)}}; }

inline json to_json(const UnivariateLaw& law) {
  return std::visit(
      detail::overloaded{
          [](const Binomial& b) -> json { return {{"family", "binomial"}, {"n", b.n}, {"p", b.p}}; },
          [](const Poisson& p) -> json { return {{"family", "poisson"}, {"lambda", p.lambda}}; },
          [](const NegativeBinomial& nb) -> json {
            return {{"family", "negative_binomial"}, {"n", nb.n}, {"q", nb.q}};
          },
          [](const Hermite& h) -> json {
            return {{"family", "hermite"}, {"mu", h.mu}, {"sigma2", h.sigma2}};
          },
          [](const FinitePmf& f) -> json {
            json mass = json::array();
            for (const auto& [x, w] : f.weights) mass.push_back({{"y", CountVector{x}}, {"p", w}});
            return {{"family", "finite_pmf"}, {"dim", 1}, {"mass", mass}};
          },
      },
      law);
}

inline json to_json(const MultivariateLaw& law) {
  return std::visit(
      detail::overloaded{
          [](const Multinomial& m) -> json {
            return {{"family", "multinomial"}, {"n", m.n}, {"p", m.p.values()}};
          },
          [](const ProductPoisson& p) -> json {
            return {{"family", "product_poisson"}, {"lambda", p.lambda}};
          },
          [](const NegativeMultinomial& nm) -> json {
            return {{"family", "negative_multinomial"}, {"n", nm.n}, {"q", nm.q}};
          },
          [](const MultivariateHermite& h) -> json {
            return {{"family", "multivariate_hermite"},
                    {"alpha", h.alpha},
                    {"beta", to_json(h.beta)},
                    {"mu", h.mean()},
                    {"sigma", to_json(h.disp())}};
          },
          [](const JointFinitePmf& j) -> json {
            json out = to_json(j.pmf);
            out["family"] = "joint_finite_pmf";
            return out;
          },
      },
      law);
}

inline json to_json(const McReport& r) {
  json out = {{"n_samples", r.n_samples}, {"seed", r.seed},
              {"mean", r.mean},           {"disp", to_json(r.disp)},
              {"std_err_mean", r.std_err_mean}, {"batches", r.batches}};
  if (r.std_err_disp) out["std_err_disp"] = to_json(*r.std_err_disp);
  return out;
}

// ---------------------------------------------------------------------------
// Mini-language

inline JointPmf read_pmf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("pmf: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("pmf: '" + path + "' is not valid JSON: " + e.what());
  }
  return joint_pmf_from_json(j);
}

inline AnyLaw parse_law(std::string_view spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& tag = parts.front();
  auto expect = [&](std::size_t n) {
    if (parts.size() != n)
      throw ParseError("'" + std::string(spec) + "': " + tag + " takes " + std::to_string(n - 1) +
                       " field(s)");
  };
  AnyLaw out;
  if (tag == "bin") {
    expect(3);
    out = UnivariateLaw{Binomial{parse_count(parts[1], "bin n"), parse_real(parts[2], "bin p")}};
  } else if (tag == "po") {
    expect(2);
    out = UnivariateLaw{Poisson{parse_real(parts[1], "po lambda")}};
  } else if (tag == "negbin") {
    expect(3);
    out = UnivariateLaw{
        NegativeBinomial{parse_count(parts[1], "negbin n"), parse_real(parts[2], "negbin q")}};
  } else if (tag == "herm") {
    expect(3);
    out = UnivariateLaw{Hermite{parse_real(parts[1], "herm mu"), parse_real(parts[2], "herm sigma2")}};
  } else if (tag == "multi") {
    expect(3);
    out = MultivariateLaw{
        Multinomial{parse_count(parts[1], "multi n"), ProbVector(parse_vector(parts[2], "multi p"))}};
  } else if (tag == "mpo") {
    expect(2);
    out = MultivariateLaw{ProductPoisson{parse_vector(parts[1], "mpo lambda")}};
  } else if (tag == "negmulti") {
    expect(3);
    out = MultivariateLaw{
        NegativeMultinomial{parse_count(parts[1], "negmulti n"), parse_vector(parts[2], "negmulti q")}};
  } else if (tag == "mherm") {
    expect(3);
    out = MultivariateLaw{MultivariateHermite::from_moments(parse_vector(parts[1], "mherm mu"),
                                                            parse_matrix(parts[2], "mherm Sigma"))};
  } else if (tag == "pmf") {
    const std::string rest(spec.substr(4));
    if (rest.size() < 2 || rest.front() != '@')
      throw ParseError("'" + std::string(spec) + "': expected pmf:@file.json");
    JointPmf p = read_pmf_file(rest.substr(1));
    if (p.dim() == 1) {
      FinitePmf f;
      for (const auto& [y, w] : p.mass()) f.weights[y[0]] = w;
      out = UnivariateLaw{f};
    } else {
      out = MultivariateLaw{JointFinitePmf{std::move(p)}};
    }
  } else {
    throw ParseError("unknown distribution '" + tag + "' in '" + std::string(spec) + "'");
  }
  std::visit([](const auto& law) { validate(law); }, out);
  return out;
}

inline UnivariateLaw parse_univariate(std::string_view spec) {
  AnyLaw law = parse_law(spec);
  if (auto* u = std::get_if<UnivariateLaw>(&law)) return *u;
  throw ParseError("'" + std::string(spec) + "' is multivariate; a univariate law is required");
}

/// Univariate laws are embedded as one-dimensional multivariate laws.
inline MultivariateLaw parse_multivariate(std::string_view spec) {
  AnyLaw law = parse_law(spec);
  if (auto* u = std::get_if<UnivariateLaw>(&law)) return embed(*u);
  return std::get<MultivariateLaw>(law);
}

}  // namespace remark::io
