#include "sagesimplex/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sagesimplex/certificates.hpp"
#include "sagesimplex/decompose.hpp"
#include "sagesimplex/io.hpp"
#include "sagesimplex/oracle.hpp"
#include "sagesimplex/solver.hpp"
#include "sagesimplex/univariate.hpp"

namespace sagesimplex::cli {

namespace {

struct Outcome {
  int code = kInputError;
  Json body;
};

struct CheckSettings {
  std::string mode = "constrained";
  double tol = kEvalTol;
  int max_iter = 300;
  int samples = 2000;
  int budget = 4000;
  std::uint64_t seed = 12345;
  int depth = 20;
};

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json diagnostics_to_json(const SimplexDiagnostics& d) {
  Json betas = Json::array();
  for (const auto& b : d.betas) {
    betas.push_back({{"beta", vector_to_json(b.beta)},
                     {"lambda", vector_to_json(b.lambda)},
                     {"in_hull", b.in_hull},
                     {"not_in_A", b.not_in_A}});
  }
  return {{"eligible", d.eligible},
          {"affinely_independent", d.affinely_independent},
          {"betas", betas},
          {"reasons", d.reasons}};
}

Json witness_json(const Signomial& f, const Vector& x) {
  return {{"status", "falsified"}, {"witness", vector_to_json(x)}, {"value", f(x)}};
}

Outcome check_signomial(const Problem& p, const ConvexRegion& X, const CheckSettings& s) {
  const Signomial& f = p.f;
  SupportPartition part;
  try {
    part = p.partition();
  } catch (const StructureError&) {
    if (auto w = falsify(f, X, s.budget, s.seed, s.tol)) return {kFalsified, witness_json(f, *w)};
    throw;
  }
  SageOptions opt;
  opt.max_iter = s.max_iter;
  opt.sample_depth = s.depth;
  const SageResult r = sage_membership(f, part, X, SageMode::SignedNonnegC, opt);
  if (r.found && r.certificate) {
    const CertificateReport rep = verify_certificate(*r.certificate, f, X, s.samples);
    if (rep.pass) {
      return {kCertified,
              {{"status", "certified"},
               {"mode", s.mode},
               {"method", r.method},
               {"certificate", certificate_to_json(*r.certificate)},
               {"worst_slack", number_or_null(rep.worst_slack)}}};
    }
  }

  if (s.mode == "sage" && validate_simplex_problem(part).eligible &&
      (std::holds_alternative<FullSpace>(X) || is_bounded(X))) {
    const MomentRegion Y = build_moment_region(X, part.positive, default_anchor(part.positive),
                                               MomentMode::Sample, s.depth);
    const DecomposeResult dr = decompose(f, part, Y);
    if (dr.ok && dr.dec.epsilon_used == 0.0) {
      const DecompositionReport rep = verify_decomposition(dr.dec, f, Y, &X, s.samples);
      if (rep.pass) {
        return {kCertified,
                {{"status", "certified"},
                 {"mode", s.mode},
                 {"method", "decompose"},
                 {"decomposition", decomposition_to_json(dr.dec)}}};
      }
    }
  }

  if (auto w = falsify(f, X, s.budget, s.seed, s.tol)) return {kFalsified, witness_json(f, *w)};

  Json body{{"status", "inconclusive"},
            {"mode", s.mode},
            {"method", r.method},
            {"best_slack", number_or_null(r.best_slack)},
            {"slack_upper_bound", number_or_null(r.slack_upper_bound)},
            {"proven_nonmember", r.proven_nonmember},
            {"iterations", r.iterations}};
  if (!r.note.empty()) body["note"] = r.note;
  return {kInconclusive, body};
}

ConvexRegion require_x_region(const RegionSpec& spec, const char* cmd) {
  if (!spec.x_region) throw InputError(std::string(cmd) + " needs a region in x coordinates");
  return *spec.x_region;
}

RegionSpec load_region(const std::string& path, int dimension) {
  if (path.empty()) return RegionSpec{ConvexRegion{FullSpace{dimension}}, {}};
  RegionSpec spec = region_from_json(read_json_file(path));
  if (spec.x_region && region_dimension(*spec.x_region) != dimension) {
    throw InputError("region dimension differs from the problem dimension");
  }
  return spec;
}

Interval1D interval_from(const std::string& lower, const std::string& upper) {
  auto parse = [](const std::string& s, double fallback) {
    if (s.empty()) return fallback;
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double v = 0.0;
    if (!(in >> v) || !in.eof()) throw InputError("cannot parse bound \"" + s + "\"");
    return v;
  };
  Interval1D X{parse(lower, -kInf), parse(upper, kInf)};
  validate_region(X);
  return X;
}

void write_csv(const std::string& path, const std::string& prefix, int width,
               const std::vector<std::pair<Vector, double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  for (int i = 0; i < width; ++i) out << prefix << (i + 1) << ',';
  out << "f\n";
  for (const auto& [x, fx] : rows) {
    for (Eigen::Index i = 0; i < x.size(); ++i) out << x[i] << ',';
    out << fx << '\n';
  }
}

Json grid_json(const GridMinResult& g) {
  Json cands = Json::array();
  for (const auto& c : g.candidates) cands.push_back({{"x", vector_to_json(c.x)}, {"value", c.value}});
  return {{"value", g.value}, {"argmin", vector_to_json(g.argmin)}, {"candidates", cands},
          {"points", g.points}, {"boundary_limited", g.boundary_limited}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonnegativity certificates and circuit decompositions for signomials"};
  app.require_subcommand(1);
  std::function<Outcome()> action;

  CheckSettings cs;
  std::string problem_path, region_path;

  auto* check = app.add_subcommand("check", "Certify, falsify or report inconclusive");
  check->add_option("problem", problem_path, "Signomial JSON")->required();
  check->add_option("--region", region_path, "Region JSON (default: full space)");
  check->add_option("--mode", cs.mode, "global, constrained or sage")
      ->check(CLI::IsMember({"global", "constrained", "sage"}));
  check->add_option("--tol", cs.tol, "Falsification threshold")->envname("SAGESIMPLEX_TOL");
  check->add_option("--max-iter", cs.max_iter, "Cutting-plane iterations")->envname("SAGESIMPLEX_MAX_ITER");
  check->add_option("--samples", cs.samples, "Verification sample count")->envname("SAGESIMPLEX_SAMPLES");
  check->add_option("--budget", cs.budget, "Falsification budget")->envname("SAGESIMPLEX_BUDGET");
  check->add_option("--seed", cs.seed, "Falsification seed")->envname("SAGESIMPLEX_SEED");
  check->add_option("--depth", cs.depth, "Sampling depth for moment regions")->envname("SAGESIMPLEX_GRID_DEPTH");
  check->callback([&] {
    action = [&]() -> Outcome {
      const Problem p = problem_from_json(read_json_file(problem_path));
      const ConvexRegion X = cs.mode == "global"
                                 ? ConvexRegion{FullSpace{p.f.dimension()}}
                                 : require_x_region(load_region(region_path, p.f.dimension()), "check");
      return check_signomial(p, X, cs);
    };
  });

  double epsilon = 0.0;
  bool nonneg_coefficients = false, exact = false, no_canonicalize = false;
  int depth = 20, samples = 2000;
  auto* dec = app.add_subcommand("decompose", "Split f into nonnegative circuit parts");
  dec->add_option("problem", problem_path, "Signomial JSON")->required();
  dec->add_option("region_file", region_path, "Region JSON (default: full space)");
  dec->add_option("--region", region_path, "Region JSON");
  dec->add_option("--epsilon", epsilon, "Allowed negativity")->envname("SAGESIMPLEX_EPSILON");
  dec->add_flag("--nonnegative-coefficients", nonneg_coefficients, "Require every part to have c >= 0");
  dec->add_flag("--exact", exact, "Use polytope vertices only as moment atoms");
  dec->add_flag("--no-canonicalize", no_canonicalize, "Keep parts as produced by the splits");
  dec->add_option("--depth", depth, "Sampling depth for the moment region")->envname("SAGESIMPLEX_GRID_DEPTH");
  dec->add_option("--samples", samples, "Verification sample count")->envname("SAGESIMPLEX_SAMPLES");
  dec->callback([&] {
    action = [&]() -> Outcome {
      const Problem p = problem_from_json(read_json_file(problem_path));
      const SupportPartition part = p.partition();
      const SimplexDiagnostics diag = validate_simplex_problem(part);
      if (!diag.eligible) {
        return {kInputError, {{"status", "ineligible"}, {"diagnostics", diagnostics_to_json(diag)}}};
      }
      const RegionSpec spec = load_region(region_path, p.f.dimension());
      const std::size_t anchor = default_anchor(part.positive);
      Json body{{"status", "ok"}};
      if (spec.x_region) {
        if (const auto* P = std::get_if<VertexPolytope>(&*spec.x_region); P && P->rays.empty()) {
          const ConvexityVerdict v = a_convexity_diagnostic(*P, part.positive, anchor, 6);
          if (!v.consistent) {
            return {kInputError,
                    {{"status", "not_a_convex"}, {"detail", v.detail}, {"pairs_checked", v.pairs_checked}}};
          }
        }
      }
      const MomentRegion Y = spec.moment_region(
          part.positive, anchor, exact ? MomentMode::ExactPolytopeVertices : MomentMode::Sample, depth);
      DecomposeOptions opt;
      opt.epsilon = epsilon;
      opt.canonicalize = !no_canonicalize;
      const DecomposeResult dr = decompose(p.f, part, Y, opt);
      if (!dr.ok) {
        Json fail{{"status", "failed"}, {"failure", dr.failure}, {"moment_min", dr.moment_min}};
        if (dr.violating_v.size()) fail["violating_v"] = vector_to_json(dr.violating_v);
        const bool negative = dr.moment_min < -epsilon - kCertTol;
        return {negative ? kFalsified : kInconclusive, fail};
      }
      const ConvexRegion* X = spec.x_region ? &*spec.x_region : nullptr;
      const DecompositionReport rep = verify_decomposition(dr.dec, p.f, Y, X, samples);
      body["decomposition"] = decomposition_to_json(dr.dec);
      body["verification"] = {{"pass", rep.pass},
                              {"resummation_error", rep.resummation_error},
                              {"worst_sampled_min", number_or_null(rep.worst_sampled_min)},
                              {"worst_moment_min", number_or_null(rep.worst_moment_min)},
                              {"issues", rep.issues}};
      if (!rep.pass) {
        body["status"] = "unverified";
        return {kInconclusive, body};
      }
      if (nonneg_coefficients && !dr.dec.nonnegative_coefficients(1e-9)) {
        body["status"] = "negative_coefficients";
        return {kInconclusive, body};
      }
      return {kCertified, body};
    };
  });

  int resolution = 100;
  double box = 3.0;
  auto* mini = app.add_subcommand("minimize", "Moment-space minimum with an oracle cross-check");
  mini->add_option("problem", problem_path, "Signomial JSON")->required();
  mini->add_option("region_file", region_path, "Region JSON (default: full space)");
  mini->add_option("--region", region_path, "Region JSON");
  mini->add_option("--grid-depth", depth, "Sampling depth for the moment region")
      ->envname("SAGESIMPLEX_GRID_DEPTH");
  mini->add_option("--resolution", resolution, "Oracle grid resolution")->envname("SAGESIMPLEX_RESOLUTION");
  mini->add_option("--box", box, "Oracle half-width on the full space")->envname("SAGESIMPLEX_BOX");
  mini->callback([&] {
    depth = std::max(depth, 1);
    action = [&]() -> Outcome {
      const Problem p = problem_from_json(read_json_file(problem_path));
      const SupportPartition part = p.partition();
      const RegionSpec spec = load_region(region_path, p.f.dimension());
      Json body{{"moment", nullptr}, {"oracle", nullptr}};
      double moment_value = kInf, oracle_value = kInf;
      if (validate_simplex_problem(part).eligible) {
        try {
          const MomentRegion Y = spec.moment_region(part.positive, default_anchor(part.positive),
                                                    MomentMode::Sample, depth);
          const MomentReport mr = moment_program(p.f, part, Y);
          moment_value = mr.x.size() ? mr.f_value : mr.solve.value;
          body["moment"] = {{"value", moment_value},
                            {"objective", mr.solve.value},
                            {"argmin", mr.x.size() ? vector_to_json(mr.x) : Json(nullptr)},
                            {"v", vector_to_json(mr.v)},
                            {"gap", number_or_null(mr.solve.gap)},
                            {"status", to_string(mr.solve.status)},
                            {"attained", mr.attained}};
        } catch (const UnsupportedRegionError& e) {
          body["moment_note"] = e.what();
        }
      } else {
        body["moment_note"] = "instance is not eligible for the moment program";
      }
      if (spec.x_region) {
        const ConvexRegion& X = *spec.x_region;
        if (std::holds_alternative<FullSpace>(X)) {
          const GridMinResult g = global_min_estimate(p.f, box, resolution);
          oracle_value = g.value;
          body["oracle"] = grid_json(g);
        } else if (is_bounded(X)) {
          const GridMinResult g = grid_min(p.f, X, resolution);
          oracle_value = g.value;
          body["oracle"] = grid_json(g);
        }
      }
      if (body["moment"].is_null() && body["oracle"].is_null()) {
        throw InputError("neither the moment program nor the oracle applies to this instance");
      }
      body["gap"] = number_or_null(std::abs(moment_value - oracle_value));
      return {kCertified, body};
    };
  });

  auto* uni = app.add_subcommand("univariate", "One-variable decision procedures");
  uni->require_subcommand(1);
  double alpha1 = 0.0, alpha2 = 1.0, beta1 = -1.0, beta2 = 0.5, b_point = 1.0;
  std::vector<double> betas, coefficients;
  std::string lower, upper;
  auto add_interval = [&](CLI::App* c) {
    c->add_option("--lower", lower, "Lower end of X (number or -inf)");
    c->add_option("--upper", upper, "Upper end of X (number or inf)");
  };

  auto* coincide = uni->add_subcommand("coincide", "Does the SAGE cone equal the nonnegativity cone?");
  coincide->add_option("--alpha1", alpha1)->required();
  coincide->add_option("--alpha2", alpha2)->required();
  coincide->add_option("--beta", betas, "Negative support points")->required();
  add_interval(coincide);
  coincide->callback([&] {
    action = [&]() -> Outcome {
      UnivariateInstance inst{alpha1, alpha2, betas, interval_from(lower, upper)};
      std::sort(inst.B.begin(), inst.B.end());
      const CoincidenceVerdict v = cone_coincidence(inst);
      Json body{{"verdict", v.coincide ? "coincide" : "differ"},
                {"reason", v.reason},
                {"recession_cone", to_string(v.cones.rec)},
                {"dual_cone", to_string(v.cones.dual)},
                {"admissible", region_to_json(v.admissible)},
                {"outside", v.outside}};
      if (v.witness) body["witness"] = {v.witness->beta1, v.witness->alpha, v.witness->beta2};
      return {kCertified, body};
    };
  });

  auto* split = uni->add_subcommand("split", "Proportional split over X = [a, ...]");
  split->add_option("problem", problem_path, "Univariate signomial JSON")->required();
  add_interval(split);
  split->callback([&] {
    action = [&]() -> Outcome {
      const Problem p = problem_from_json(read_json_file(problem_path));
      const ProportionalSplit s = proportional_split_1d(p.f, interval_from(lower, upper));
      if (!s.ok) {
        const bool negative = s.f_at_a < -kCertTol;
        return {negative ? kFalsified : kInconclusive, {{"status", "failed"}, {"failure", s.failure}}};
      }
      return {kCertified,
              {{"status", "ok"}, {"weights", s.weights}, {"f_at_a", s.f_at_a},
               {"decomposition", decomposition_to_json(s.dec)}}};
    };
  });

  auto* counter = uni->add_subcommand("counterexample", "Nonnegative on X but not X-SAGE");
  counter->add_option("--alpha1", alpha1)->required();
  counter->add_option("--alpha2", alpha2)->required();
  counter->add_option("--beta1", beta1)->required();
  counter->add_option("--beta2", beta2)->required();
  counter->add_option("--b", b_point, "A point of X other than inf X")->required();
  add_interval(counter);
  counter->callback([&] {
    action = [&]() -> Outcome {
      const Interval1D X = interval_from(lower, upper);
      const Counterexample ce = counterexample(alpha1, alpha2, beta1, beta2, X, b_point);
      CheckSettings s = cs;
      s.mode = "constrained";
      const Outcome chk = check_signomial(Problem{ce.f, std::nullopt}, X, s);
      Json body{{"signomial", signomial_to_json(ce.f)},
                {"c1", ce.c1},
                {"c2", ce.c2},
                {"d_beta1", ce.d1},
                {"d_beta2", ce.d2},
                {"zero", ce.zero},
                {"check_exit", chk.code},
                {"check", chk.body}};
      return {chk.code == kInconclusive ? kCertified : kInconclusive, body};
    };
  });

  auto* desc = uni->add_subcommand("descartes", "Sign changes and a root-count check");
  desc->add_option("problem", problem_path, "Univariate signomial JSON");
  desc->add_option("--coefficients", coefficients, "Coefficients ordered by exponent");
  add_interval(desc);
  desc->callback([&] {
    action = [&]() -> Outcome {
      if (problem_path.empty()) {
        if (coefficients.empty()) throw InputError("descartes needs a problem file or --coefficients");
        return {kCertified, {{"sign_changes", sign_changes(coefficients)}}};
      }
      const Problem p = problem_from_json(read_json_file(problem_path));
      Json body{{"sign_changes", sign_changes(p.f)}};
      if (!lower.empty() && !upper.empty()) {
        const auto roots = find_roots_1d(p.f, interval_from(lower, upper));
        Json rs = Json::array();
        for (const auto& r : roots) rs.push_back({{"x", r.x}, {"multiplicity", r.multiplicity}});
        body["roots"] = rs;
        body["bound_ok"] = count_roots_bound_check(p.f, roots);
      }
      return {kCertified, body};
    };
  });

  std::string out_prefix = "sample";
  int sample_depth = 10;
  auto* sample = app.add_subcommand("sample", "CSV grids of f in x and moment coordinates");
  sample->add_option("problem", problem_path, "Signomial JSON")->required();
  sample->add_option("region", region_path, "Bounded region JSON")->required();
  sample->add_option("--grid-depth", sample_depth, "Grid subdivisions")->envname("SAGESIMPLEX_GRID_DEPTH");
  sample->add_option("--out", out_prefix, "Output prefix for <prefix>_x.csv and <prefix>_v.csv");
  sample->callback([&] {
    action = [&]() -> Outcome {
      const Problem p = problem_from_json(read_json_file(problem_path));
      const ConvexRegion X = require_x_region(load_region(region_path, p.f.dimension()), "sample");
      if (!is_bounded(X)) throw UnsupportedRegionError("sample needs a bounded region");
      const auto pts = sample_region(X, std::max(sample_depth, 0));
      const SupportPartition part = p.partition();
      const std::size_t anchor = default_anchor(part.positive);
      std::vector<std::pair<Vector, double>> xrows, vrows;
      double mn = kInf;
      Vector argmin;
      for (const auto& x : pts) {
        const double fx = p.f(x);
        xrows.emplace_back(x, fx);
        vrows.emplace_back(moment_map(part.positive, anchor, x), fx);
        if (fx < mn) {
          mn = fx;
          argmin = x;
        }
      }
      const std::string xpath = out_prefix + "_x.csv", vpath = out_prefix + "_v.csv";
      write_csv(xpath, "x", p.f.dimension(), xrows);
      write_csv(vpath, "v", static_cast<int>(part.positive.size()) - 1, vrows);
      return {kCertified,
              {{"x_csv", xpath}, {"v_csv", vpath}, {"points", pts.size()}, {"min", mn},
               {"argmin", vector_to_json(argmin)}}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kCertified;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kCertified;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    out << Json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
    return kInputError;
  }

  try {
    if (!action) throw InputError("no command given");
    const Outcome o = action();
    out << o.body.dump(2) << '\n';
    return o.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    out << Json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    out << Json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
    return kInputError;
  }
}

}  // namespace sagesimplex::cli
