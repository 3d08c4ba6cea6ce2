#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "projgeom/json_io.hpp"
#include "projgeom/sampling.hpp"

namespace projgeom::cli {

// Exit-code contract: 0 success, 2 input error, 3 mathematical precondition
// violated, 4 invariant failure.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kPreconditionError = 3,
  kInvariantError = 4,
};

struct GlobalOpts {
  unsigned long long seed = 12345;
  double tol = 0.0;  // 0 = per-operation defaults
  std::string out;
  bool csv = false;

  double snap_tol() const { return tol > 0.0 ? tol : 1e-8; }
};

namespace detail {

inline int emit(const GlobalOpts& g, const json& j, const std::string& csv) {
  const std::string text = g.csv ? csv : j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) throw ParseError("cannot open output file: " + g.out);
    f << text;
  }
  return kOk;
}

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string bound_csv_rows(const std::vector<BoundReport>& reports) {
  std::string csv = "kind,bound,actual,valid,margin,quad_error\n";
  for (const auto& r : reports)
    csv += r.kind + "," + fmt(r.bound) + "," + fmt(r.actual) + "," +
           csv_bool(r.valid) + "," + fmt(r.margin) + "," + fmt(r.quad_error) +
           "\n";
  return csv;
}

}  // namespace detail

inline int cmd_angle(const GlobalOpts& g, const std::string& pfile,
                     const std::string& qfile) {
  const Projection p = projection_from_json(load_json_file(pfile), g.snap_tol());
  const Projection q = projection_from_json(load_json_file(qfile), g.snap_tol());
  const SubspacePair pair = angular_operator(p, q);
  json j;
  j["distance"] = pair.dist;
  j["theta_norm"] = pair.theta_norm();
  j["x_norm"] = pair.x_norm();
  const std::string csv = "distance,theta_norm,x_norm\n" +
                          detail::fmt(pair.dist) + "," +
                          detail::fmt(pair.theta_norm()) + "," +
                          detail::fmt(pair.x_norm()) + "\n";
  return detail::emit(g, j, csv);
}

inline int cmd_geodesic(const GlobalOpts& g, const std::string& pfile,
                        const std::string& qfile, int samples) {
  const Projection p = projection_from_json(load_json_file(pfile), g.snap_tol());
  const Projection q = projection_from_json(load_json_file(qfile), g.snap_tol());
  const ProjectionPath path = geodesic(p, q, samples);
  const LengthReport rep = verify_arcsine_law(path);
  json j;
  j["path"] = path_to_json(path);
  j["length_report"] = length_report_to_json(rep);
  std::string csv = "t,distance_from_start\n";
  for (size_t i = 0; i < path.times.size(); ++i)
    csv += detail::fmt(path.times[i]) + "," +
           detail::fmt(distance(path.points.front(), path.points[i])) + "\n";
  return detail::emit(g, j, csv);
}

inline int cmd_length(const GlobalOpts& g, const std::string& pathfile) {
  const ProjectionPath path =
      path_from_json(load_json_file(pathfile), g.snap_tol());
  const LengthReport rep = verify_arcsine_law(path);
  const json j = length_report_to_json(rep);
  std::string csv = "polygonal,riemannian,endpoints_arcsin,arcsine_law_ok\n";
  csv += detail::fmt(rep.polygonal) + ",";
  csv += rep.riemannian.has_value() ? detail::fmt(*rep.riemannian) : "";
  csv += "," + detail::fmt(rep.endpoints_arcsin) + "," +
         detail::csv_bool(rep.arcsine_law_ok) + "\n";
  return detail::emit(g, j, csv);
}

struct BoundOpts {
  std::string kind = "diag";
  double norm_v = -1.0;
  double d = 1.0;
  int n = 8;
  int trials = 1;
  int samples = 201;
  double t_end = 1.0;
  double gap_threshold = 0.0;
  bool subordinated = false;
  std::string a_file, v_file, p_file, q_file;
};

// One randomized brute-force instance of a closed-form bound: a gapped A, a
// perturbation of the requested kind and size, and the distance between the
// spectral projection of A for the low cluster and the spectral projection
// of A + V for the eigenvalues inside the half-gap neighborhood of that
// cluster.
inline BoundReport closed_form_instance(Rng& rng, const std::string& kind,
                                        double norm_v, double d, int n) {
  const GappedOperator go = random_gapped_hermitian(rng, n, n / 2, d, 1.0);
  const BoundPrediction pred = kind == "diag" ? diag_bound(norm_v, d)
                                              : offdiag_bound(norm_v, d);
  const HermMatrix v =
      kind == "diag" ? random_hermitian(rng, n, norm_v)
                     : random_offdiag_perturbation(rng, go.a, go.split, norm_v);
  const HermMatrix b(go.a.mat() + v.mat(), 1e-9);
  const SpectralSplit& s = go.split;
  const Projection pa = spectral_projection(go.a, [&](double lam) {
    return projgeom::detail::dist_to_set(lam, s.omega) <
           projgeom::detail::dist_to_set(lam, s.omega_big);
  });
  const Projection pb = spectral_projection(b, [&](double lam) {
    return projgeom::detail::dist_to_set(lam, s.omega) < 0.5 * d;
  });
  BoundReport rep;
  rep.kind = kind;
  rep.bound = pred.value;
  rep.actual = distance(pa, pb);
  rep.valid = pred.valid;
  rep.margin = rep.bound - rep.actual;
  return rep;
}

inline int cmd_bound(const GlobalOpts& g, const BoundOpts& o) {
  std::vector<BoundReport> reports;
  if (o.kind == "diag" || o.kind == "offdiag") {
    if (o.norm_v < 0.0)
      throw ParseError("bound: --norm-v is required for kind " + o.kind);
    Rng rng(g.seed);
    for (int t = 0; t < o.trials; ++t)
      reports.push_back(closed_form_instance(rng, o.kind, o.norm_v, o.d, o.n));
  } else if (o.kind == "integral") {
    if (!o.p_file.empty() || !o.q_file.empty()) {
      if (o.p_file.empty() || o.q_file.empty())
        throw ParseError("bound: geodesic mode needs both --p and --q");
      const Projection p =
          projection_from_json(load_json_file(o.p_file), g.snap_tol());
      const Projection q =
          projection_from_json(load_json_file(o.q_file), g.snap_tol());
      const OperatorPath path = as_operator_path(geodesic(p, q, o.samples));
      const SpectralSplit split0 = make_split({1.0}, {0.0});
      const auto splits = track_components(path, split0);
      reports.push_back(integral_bound(path, splits, true));
    } else {
      if (o.a_file.empty() || o.v_file.empty())
        throw ParseError("bound: integral kind needs --a and --v (or --p/--q)");
      const Matrix am = matrix_from_json(load_json_file(o.a_file));
      const Matrix vm = matrix_from_json(load_json_file(o.v_file));
      const HermMatrix a(am, 1e-8);
      const HermMatrix v(vm, 1e-8);
      const OperatorPath path = linear_operator_path(a, v, o.t_end, o.samples);
      const SpectralSplit split0 = split_spectrum(a, o.gap_threshold);
      const auto splits = track_components(path, split0);
      reports.push_back(integral_bound(path, splits, o.subordinated));
    }
  } else {
    throw ParseError("bound: unknown kind '" + o.kind + "'");
  }
  json j;
  if (reports.size() == 1) {
    j = bound_report_to_json(reports.front());
  } else {
    j = json::array();
    for (const auto& r : reports) j.push_back(bound_report_to_json(r));
  }
  return detail::emit(g, j, detail::bound_csv_rows(reports));
}

inline int cmd_constants(const GlobalOpts& g) {
  const double precision = g.tol > 0.0 ? g.tol : 1e-12;
  const ConstantResult cs = compute_c_star(precision);
  const ConstantResult cp = compute_c_pi();
  json j = json::array({constant_to_json(cs), constant_to_json(cp)});
  std::string csv = "name,value,bracket_lo,bracket_hi,method\n";
  for (const auto& c : {cs, cp})
    csv += c.name + "," + detail::fmt(c.value) + "," +
           detail::fmt(c.bracket_lo) + "," + detail::fmt(c.bracket_hi) + "," +
           c.method + "\n";
  return detail::emit(g, j, csv);
}

inline int cmd_verify(const GlobalOpts& g, int grid) {
  const GridCheck a = verify_appendix_a(grid);
  const GridCheck b = verify_appendix_b(grid);
  const auto check_json = [](const GridCheck& c) {
    json j;
    j["grid"] = c.grid;
    j["min_slack"] = c.min_slack;
    j["argmin"] = c.argmin;
    j["min_slack_aux"] = c.min_slack_aux;
    j["argmin_aux"] = c.argmin_aux;
    j["identity_max_err"] = c.identity_max_err;
    j["ok"] = c.ok;
    return j;
  };
  json j;
  j["appendix_a"] = check_json(a);
  j["appendix_b"] = check_json(b);
  std::string csv =
      "appendix,grid,min_slack,argmin,min_slack_aux,argmin_aux,"
      "identity_max_err,ok\n";
  csv += "a," + std::to_string(a.grid) + "," + detail::fmt(a.min_slack) + "," +
         detail::fmt(a.argmin) + "," + detail::fmt(a.min_slack_aux) + "," +
         detail::fmt(a.argmin_aux) + "," + detail::fmt(a.identity_max_err) +
         "," + detail::csv_bool(a.ok) + "\n";
  csv += "b," + std::to_string(b.grid) + "," + detail::fmt(b.min_slack) + "," +
         detail::fmt(b.argmin) + "," + detail::fmt(b.min_slack_aux) + "," +
         detail::fmt(b.argmin_aux) + "," + detail::fmt(b.identity_max_err) +
         "," + detail::csv_bool(b.ok) + "\n";
  const int rc = detail::emit(g, j, csv);
  if (!a.ok || !b.ok)
    throw InvariantError("verify: an appendix grid check failed");
  return rc;
}

struct HilbertOpts {
  int n = 512;
  double t = -1.0;
  double p = -1.0;
  int m = 2000;
};

inline int cmd_hilbert(const GlobalOpts& g, const HilbertOpts& o) {
  if (o.t >= 0.0 && o.p >= 0.0)
    throw ParseError("hilbert: give either --t (deviation) or --p (norm)");
  if (o.t >= 0.0) {
    const FourierModel model(o.n);
    const PathDeviation dev = projection_path_deviation(model, o.t);
    const std::string csv = "actual,predicted,defect\n" +
                            detail::fmt(dev.actual) + "," +
                            detail::fmt(dev.predicted) + "," +
                            detail::fmt(dev.defect) + "\n";
    return detail::emit(g, deviation_to_json(dev), csv);
  }
  if (o.p >= 0.0) {
    const ToeplitzHp hp(o.p, o.m);
    const double norm = hilbert_norm(hp);
    const double limit = hilbert_norm_limit(o.p);
    const std::string csv = "norm,limit,gap\n" + detail::fmt(norm) + "," +
                            detail::fmt(limit) + "," +
                            detail::fmt(limit - norm) + "\n";
    return detail::emit(g, hilbert_norm_to_json(norm, limit), csv);
  }
  throw ParseError("hilbert: one of --t or --p is required");
}

inline int run(int argc, char** argv) {
  CLI::App app{"orthogonal projection geometry and spectral bound toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed for sampled instances");
  app.add_option("--tol", g.tol, "tolerance override (0 = defaults)");
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  bool json_flag = false;
  app.add_flag("--json", json_flag, "JSON output (default)");
  app.add_flag("--csv", g.csv, "CSV output");

  std::string pfile, qfile, pathfile;
  int samples = 201;
  CLI::App* angle = app.add_subcommand("angle", "angular data of a pair");
  angle->add_option("p", pfile, "projection JSON file")->required();
  angle->add_option("q", qfile, "projection JSON file")->required();

  CLI::App* geo = app.add_subcommand("geodesic", "geodesic between a pair");
  geo->add_option("p", pfile, "projection JSON file")->required();
  geo->add_option("q", qfile, "projection JSON file")->required();
  geo->add_option("--samples", samples, "sample count");

  CLI::App* len = app.add_subcommand("length", "length report of a path");
  len->add_option("path", pathfile, "path JSON file")->required();

  BoundOpts bo;
  CLI::App* bound = app.add_subcommand("bound", "perturbation bounds");
  bound->add_option("--kind", bo.kind, "diag | offdiag | integral");
  bound->add_option("--norm-v", bo.norm_v, "perturbation norm");
  bound->add_option("--d", bo.d, "spectral gap");
  bound->add_option("--n", bo.n, "matrix dimension for sampled instances");
  bound->add_option("--trials", bo.trials, "number of sampled instances");
  bound->add_option("--samples", bo.samples, "path samples (integral kind)");
  bound->add_option("--t-end", bo.t_end, "path endpoint (integral kind)");
  bound->add_option("--gap-threshold", bo.gap_threshold,
                    "minimum spectral gap for the split (integral kind)");
  bound->add_flag("--subordinated", bo.subordinated,
                  "use the c = 1 subordinated constant (integral kind)");
  bound->add_option("--a", bo.a_file, "operator JSON file (integral kind)");
  bound->add_option("--v", bo.v_file, "perturbation JSON file (integral kind)");
  bound->add_option("--p", bo.p_file, "projection file (integral, geodesic)");
  bound->add_option("--q", bo.q_file, "projection file (integral, geodesic)");

  CLI::App* consts = app.add_subcommand("constants", "c_star and c_pi");

  int grid = 10000;
  CLI::App* verify = app.add_subcommand("verify", "appendix inequality grids");
  verify->add_option("--grid", grid, "grid points");

  HilbertOpts ho;
  CLI::App* hilbert = app.add_subcommand("hilbert", "Fourier-truncation model");
  hilbert->add_option("--n", ho.n, "truncation order (deviation mode)");
  hilbert->add_option("--t", ho.t, "path parameter in [0, pi/2] (deviation)");
  hilbert->add_option("--p", ho.p, "Hilbert transform parameter in (0,1)");
  hilbert->add_option("--m", ho.m, "Toeplitz half-width (norm mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (app.got_subcommand(angle)) return cmd_angle(g, pfile, qfile);
    if (app.got_subcommand(geo)) return cmd_geodesic(g, pfile, qfile, samples);
    if (app.got_subcommand(len)) return cmd_length(g, pathfile);
    if (app.got_subcommand(bound)) return cmd_bound(g, bo);
    if (app.got_subcommand(consts)) return cmd_constants(g);
    if (app.got_subcommand(verify)) return cmd_verify(g, grid);
    if (app.got_subcommand(hilbert)) return cmd_hilbert(g, ho);
    std::cerr << "no subcommand selected\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const Error& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariantError;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return kInvariantError;
  }
}

}  // namespace projgeom::cli
