#include "sagesimplex/io.hpp"

#include <cmath>
#include <fstream>

namespace sagesimplex {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field \"") + key + "\": " + e.what());
  }
}

// Accepts numbers, null and the strings "inf"/"-inf" for unbounded ends.
double bound_from_json(const Json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  throw InputError(std::string("field \"") + key + "\" must be a number, null or \"inf\"/\"-inf\"");
}

std::vector<Vector> vectors_from_json(const Json& j, const char* key) {
  std::vector<Vector> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw InputError(std::string("field \"") + key + "\" must be an array");
  for (const auto& v : j.at(key)) out.push_back(vector_from_json(v));
  return out;
}

Json vectors_to_json(const std::vector<Vector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(vector_to_json(v));
  return a;
}

Json terms_to_json(const std::vector<Term>& terms) {
  Json a = Json::array();
  for (const auto& t : terms) a.push_back({{"c", t.coefficient}, {"alpha", vector_to_json(t.exponent)}});
  return a;
}

}  // namespace

MomentRegion RegionSpec::moment_region(const std::vector<Vector>& A, std::size_t anchor, MomentMode mode,
                                       int depth) const {
  if (x_region) return build_moment_region(*x_region, A, anchor, mode, depth);
  return moment_polytope(A, anchor, moment_vertices);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Problem problem_from_json(const Json& j) {
  const int n = field<int>(j, "dimension");
  if (n < 1) throw InputError("dimension must be positive");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw InputError("field \"terms\" must be an array");
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) {
    Term term;
    term.coefficient = field<double>(t, "c");
    term.exponent = vector_from_json(t.at("alpha"));
    if (term.exponent.size() != n) throw InputError("exponent length differs from dimension");
    terms.push_back(std::move(term));
  }
  Problem p{Signomial(n, std::move(terms)), std::nullopt};
  if (j.contains("positive_support")) {
    auto A = vectors_from_json(j, "positive_support");
    for (const auto& a : A) {
      if (a.size() != n) throw InputError("positive_support entry has the wrong length");
    }
    p.declared_A = std::move(A);
  }
  return p;
}

Json signomial_to_json(const Signomial& f) {
  return {{"dimension", f.dimension()}, {"terms", terms_to_json(f.terms())}};
}

Json problem_to_json(const Problem& p) {
  Json j = signomial_to_json(p.f);
  if (p.declared_A) j["positive_support"] = vectors_to_json(*p.declared_A);
  return j;
}

RegionSpec region_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type");
  const std::string coords = j.value("coordinates", std::string("x"));
  if (coords != "x" && coords != "y") throw InputError("coordinates must be \"x\" or \"y\"");
  RegionSpec spec;
  if (type == "fullspace") {
    spec.x_region = FullSpace{field<int>(j, "dimension")};
  } else if (type == "interval") {
    Interval1D I{bound_from_json(j, "lower", -kInf), bound_from_json(j, "upper", kInf)};
    if (coords == "y") {
      // y = e^x, so y-bounds map through the logarithm; y <= 0 means unbounded below.
      I.lower = I.lower > 0.0 ? std::log(I.lower) : -kInf;
      I.upper = I.upper > 0.0 ? std::log(I.upper) : throw InputError("y upper bound must be positive");
    }
    spec.x_region = I;
  } else if (type == "vpolytope") {
    VertexPolytope P{vectors_from_json(j, "vertices"), vectors_from_json(j, "rays")};
    if (coords == "y") {
      if (!P.rays.empty()) throw InputError("rays are not supported in y coordinates");
      for (auto& v : P.vertices) {
        if (!(v.array() > 0.0).all()) throw InputError("y-coordinate vertices must be positive");
        v = v.array().log().matrix();
      }
    }
    spec.x_region = P;
  } else if (type == "moment_vpolytope") {
    spec.moment_vertices = vectors_from_json(j, "vertices");
    if (spec.moment_vertices.empty()) throw InputError("moment_vpolytope needs vertices");
    return spec;
  } else {
    throw InputError("unknown region type \"" + type + "\"");
  }
  validate_region(*spec.x_region);
  return spec;
}

Json region_to_json(const ConvexRegion& X) {
  if (const auto* F = std::get_if<FullSpace>(&X)) return {{"type", "fullspace"}, {"dimension", F->dimension}};
  if (const auto* I = std::get_if<Interval1D>(&X)) {
    Json j{{"type", "interval"}};
    j["lower"] = std::isfinite(I->lower) ? Json(I->lower) : Json(nullptr);
    j["upper"] = std::isfinite(I->upper) ? Json(I->upper) : Json(nullptr);
    return j;
  }
  const auto& P = std::get<VertexPolytope>(X);
  return {{"type", "vpolytope"}, {"vertices", vectors_to_json(P.vertices)}, {"rays", vectors_to_json(P.rays)}};
}

Json certificate_to_json(const SageCertificate& cert) {
  if (cert.parts.size() == 1) {
    const auto& p = cert.parts.front();
    return {{"type", "age"},       {"A", vectors_to_json(cert.A)}, {"beta", vector_to_json(p.beta)},
            {"d", p.d},            {"c", vector_to_json(p.c)},     {"nu", vector_to_json(p.nu)},
            {"slack", p.slack},    {"entropy_value", p.entropy_value},
            {"support_value", p.support_value}};
  }
  Json betas = Json::array(), ds = Json::array(), splits = Json::array(), nus = Json::array(),
       slacks = Json::array();
  for (const auto& p : cert.parts) {
    betas.push_back(vector_to_json(p.beta));
    ds.push_back(p.d);
    splits.push_back(vector_to_json(p.c));
    nus.push_back(vector_to_json(p.nu));
    slacks.push_back(p.slack);
  }
  return {{"type", "sage"}, {"A", vectors_to_json(cert.A)}, {"beta", betas}, {"d", ds},
          {"splits", splits}, {"nu", nus},                  {"slack", slacks}};
}

SageCertificate certificate_from_json(const Json& j) {
  const auto type = field<std::string>(j, "type");
  SageCertificate cert;
  cert.A = vectors_from_json(j, "A");
  auto part = [&](const Json& beta, const Json& d, const Json& c, const Json& nu, const Json& slack) {
    AgeCertificate p;
    p.beta = vector_from_json(beta);
    p.d = d.get<double>();
    p.c = vector_from_json(c);
    p.nu = vector_from_json(nu);
    p.slack = slack.get<double>();
    p.feasible = p.slack >= -kCertTol;
    return p;
  };
  try {
    if (type == "age") {
      cert.parts.push_back(part(j.at("beta"), j.at("d"), j.at("c"), j.at("nu"), j.at("slack")));
      cert.parts.back().entropy_value = j.value("entropy_value", 0.0);
      cert.parts.back().support_value = j.value("support_value", 0.0);
    } else if (type == "sage") {
      const auto& b = j.at("beta");
      for (std::size_t i = 0; i < b.size(); ++i) {
        cert.parts.push_back(part(b[i], j.at("d")[i], j.at("splits")[i], j.at("nu")[i], j.at("slack")[i]));
      }
    } else {
      throw InputError("unknown certificate type \"" + type + "\"");
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
  return cert;
}

Json decomposition_to_json(const Decomposition& dec) {
  Json parts = Json::array();
  for (std::size_t i = 0; i < dec.parts.size(); ++i) {
    const auto& p = dec.parts[i];
    parts.push_back({{"beta", vector_to_json(p.beta)},
                     {"d", p.d},
                     {"c", vector_to_json(p.c)},
                     {"terms", terms_to_json(dec.part_signomial(i).terms())}});
  }
  Json gamma = Json::array();
  for (const auto& s : dec.steps) gamma.push_back(s.gamma);
  return {{"dimension", dec.dimension},
          {"A", vectors_to_json(dec.A)},
          {"anchor", dec.anchor},
          {"parts", parts},
          {"gamma", gamma},
          {"epsilon_used", dec.epsilon_used},
          {"canonicalized", dec.canonicalized},
          {"warnings", dec.warnings}};
}

Decomposition decomposition_from_json(const Json& j) {
  Decomposition dec;
  try {
    dec.dimension = j.at("dimension").get<int>();
    dec.A = vectors_from_json(j, "A");
    dec.anchor = j.value("anchor", std::size_t{0});
    for (const auto& p : j.at("parts")) {
      dec.parts.push_back(CircuitPart{vector_from_json(p.at("beta")), p.at("d").get<double>(),
                                      vector_from_json(p.at("c"))});
    }
    if (j.contains("gamma")) {
      for (const auto& g : j.at("gamma")) {
        SplitStep s;
        s.gamma = g.get<double>();
        dec.steps.push_back(std::move(s));
      }
    }
    dec.epsilon_used = j.value("epsilon_used", 0.0);
    dec.canonicalized = j.value("canonicalized", false);
    if (j.contains("warnings")) dec.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed decomposition: ") + e.what());
  }
  return dec;
}

}  // namespace sagesimplex
