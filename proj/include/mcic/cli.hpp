#pragma once

// Command-line dispatch over the library: cone membership and combination,
// the matrix sign function, positive-reality analysis, realization
// arithmetic with quadratic certificates, balancing, and switched-system
// simulation. Every command reads and writes the shared JSON formats
// (json_io.hpp); trajectories can stream to CSV.
//
// Outcome taxonomy: `ok`, `refuted`, and `infeasible` are analysis results
// and exit with code 0; `error` flags malformed input or an undecided
// computation and exits non-zero. Payloads are deterministic for fixed
// arguments and seed; diagnostics are free-form.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcic/balance.hpp"
#include "mcic/cic.hpp"
#include "mcic/cones.hpp"
#include "mcic/incsim.hpp"
#include "mcic/json_io.hpp"
#include "mcic/kyp.hpp"
#include "mcic/matcore.hpp"
#include "mcic/network.hpp"
#include "mcic/pr.hpp"
#include "mcic/rational.hpp"
#include "mcic/realization.hpp"

namespace mcic {

struct CommandResult {
  std::string status = "error";  // ok | refuted | infeasible | error
  Json payload = Json::object();
  std::vector<std::string> diagnostics;
  std::string out_path;  // empty = stdout
  std::string csv_path;  // sim run only
  std::string csv_data;
  int exit_code = 1;

  Json to_json() const {
    return Json{{"status", status},
                {"payload", payload},
                {"diagnostics", diagnostics}};
  }
};

namespace cli_detail {

// Option values may be inline JSON (first non-space character '{' or '[')
// or a path to a JSON file.
inline Json read_json_arg(const std::string& arg) {
  size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos &&
      (arg[first] == '{' || arg[first] == '[')) {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw Error(std::string("inline JSON: ") + e.what());
    }
  }
  std::ifstream in(arg);
  require(in.good(), "cannot open input file '" + arg + "'");
  try {
    Json j;
    in >> j;
    return j;
  } catch (const Json::parse_error& e) {
    throw Error("file '" + arg + "': " + e.what());
  }
}

inline Matrix read_matrix(const std::string& arg) {
  return matrix_from_json(read_json_arg(arg));
}

inline RationalMatrix read_ratfun(const std::string& arg) {
  return rational_matrix_from_json(read_json_arg(arg));
}

inline Realization read_realization(const std::string& arg) {
  return realization_from_json(read_json_arg(arg));
}

// "re" or "re,im".
inline Complex parse_point(const std::string& text) {
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  require(bool(is >> re), "point '" + text + "': expected re[,im]");
  if (is >> comma) {
    require(comma == ',' && bool(is >> im),
            "point '" + text + "': expected re[,im]");
  }
  return Complex(re, im);
}

// Input lists arrive as repeated flags and/or comma-separated paths; inline
// JSON entries (containing commas of their own) must be separate arguments.
inline std::vector<std::string> expand_inputs(
    const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& item : raw) {
    size_t first = item.find_first_not_of(" \t\r\n");
    if (first != std::string::npos &&
        (item[first] == '{' || item[first] == '[')) {
      out.push_back(item);
      continue;
    }
    std::stringstream ss(item);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!piece.empty()) out.push_back(piece);
    }
  }
  return out;
}

inline Vector read_state_vector(const std::string& arg) {
  Json j = read_json_arg(arg);
  if (j.is_array()) {
    Vector v(Eigen::Index(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
      const Json& cell = j.at(i);
      if (cell.is_array()) {
        require(cell.size() == 2, "state vector: entries are [re, im]");
        v(Eigen::Index(i)) =
            Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
      } else {
        v(Eigen::Index(i)) = Complex(cell.get<double>(), 0.0);
      }
    }
    return v;
  }
  Matrix m = matrix_from_json(j);
  require(m.cols() == 1 || m.rows() == 1,
          "state vector: need a one-column or one-row matrix");
  if (m.cols() == 1) return m.col(0);
  return m.row(0).transpose();
}

inline const char* to_string(PrFailureKind k) {
  switch (k) {
    case PrFailureKind::RhpPole: return "right-half-plane-pole";
    case PrFailureKind::HermitianIndefinite: return "hermitian-indefinite";
    case PrFailureKind::NotRealOnReals: return "not-real-on-reals";
  }
  return "unknown";
}

inline Json pr_verdict_to_json(const PrVerdict& v) {
  Json failures = Json::array();
  for (const PrFailure& f : v.failures) {
    failures.push_back(Json{{"kind", to_string(f.kind)},
                            {"location", {f.location.real(), f.location.imag()}},
                            {"min_eig", f.min_eig},
                            {"detail", f.detail}});
  }
  return Json{{"is_pr", v.is_pr},
              {"failures", failures},
              {"boundary_skipped", v.boundary_skipped},
              {"samples_checked", v.samples_checked},
              {"pole_candidates", v.pole_candidates}};
}

inline PrGrid grid_from_json(const Json& j, double tol) {
  PrGrid g;
  g.tol = tol;
  if (j.is_null()) return g;
  require(j.is_object(), "grid: expected a JSON object");
  g.boundary_points = j.value("boundary_points", g.boundary_points);
  g.omega_min = j.value("omega_min", g.omega_min);
  g.omega_max = j.value("omega_max", g.omega_max);
  g.interior_re = j.value("interior_re", g.interior_re);
  g.re_min = j.value("re_min", g.re_min);
  g.re_max = j.value("re_max", g.re_max);
  g.interior_im = j.value("interior_im", g.interior_im);
  g.im_min = j.value("im_min", g.im_min);
  g.im_max = j.value("im_max", g.im_max);
  g.tol = j.value("tol", g.tol);
  return g;
}

struct Options {
  std::string out_path;
  std::string csv_path;
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
};

}  // namespace cli_detail

// Parse and execute one command line (without the program name).
inline CommandResult command_dispatch(const std::vector<std::string>& args) {
  using cli_detail::expand_inputs;
  using cli_detail::read_json_arg;
  using cli_detail::read_matrix;
  using cli_detail::read_ratfun;
  using cli_detail::read_realization;

  CommandResult result;
  cli_detail::Options opt;

  CLI::App app{"convex-cone and positive-real analysis toolkit"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // Uniform flags, registered on every leaf command.
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_path, "write the JSON result here");
    cmd->add_option("--tol", opt.tol, "numerical tolerance");
  };

  // ---- cone ---------------------------------------------------------------
  CLI::App* cone = app.add_subcommand("cone", "Lyapunov-cone operations");
  cone->require_subcommand(1);

  std::string cone_matrix, cone_h;
  CLI::App* cone_check =
      cone->add_subcommand("check", "membership in L_H (L_I by default)");
  cone_check->add_option("--matrix", cone_matrix, "matrix to test")
      ->required();
  cone_check->add_option("--H", cone_h, "Hermitian H defining the cone");
  add_common(cone_check);
  cone_check->callback([&] {
    Matrix a = read_matrix(cone_matrix);
    Json payload;
    if (cone_h.empty()) {
      LiMembership li = membership_L_I(a, opt.tol);
      payload = Json{{"cone", "L_I"},
                     {"membership", membership_to_json(li.membership)},
                     {"hermitian_part", matrix_to_json(li.split.P)},
                     {"skew_part", matrix_to_json(li.split.H)}};
    } else {
      Matrix h = read_matrix(cone_h);
      ConeMembership m = membership_L_H(a, h, opt.tol);
      payload = Json{{"cone", "L_H"}, {"membership", membership_to_json(m)}};
    }
    result.payload = payload;
    result.status = "ok";  // membership outcomes are data, not refutations
  });

  std::string witness_matrix;
  CLI::App* cone_witness = cone->add_subcommand(
      "witness", "singular-sum witness for a matrix outside the closed cone");
  cone_witness->add_option("--matrix", witness_matrix, "matrix B")->required();
  add_common(cone_witness);
  cone_witness->callback([&] {
    Matrix b = read_matrix(witness_matrix);
    MaximalityWitness w = maximality_witness(b, opt.tol);
    result.payload =
        Json{{"A", matrix_to_json(w.A)},
             {"alpha", w.alpha},
             {"sum_sigma_min", w.sum_singularity.sigma_min},
             {"sum_sigma_max", w.sum_singularity.sigma_max},
             {"sum_singular", w.sum_singularity.singular}};
    result.status = "ok";
  });

  std::vector<std::string> combine_inputs;
  std::string combine_isometry, combine_structured, combine_mode = "isometry";
  CLI::App* cone_combine =
      cone->add_subcommand("combine", "compression through an isometry");
  cone_combine
      ->add_option("--inputs", combine_inputs,
                   "matrices (files, comma-separated, or inline JSON)")
      ->required()
      ->expected(-1);
  cone_combine->add_option("--isometry", combine_isometry, "stacked map")
      ->required();
  cone_combine->add_option(
      "--structured", combine_structured,
      "treat blocks as state/signal pairs: 'n,m' split sizes");
  cone_combine->add_option("--mode", combine_mode,
                           "isometry (default) or fullrank");
  add_common(cone_combine);
  cone_combine->callback([&] {
    std::vector<std::string> names = expand_inputs(combine_inputs);
    require(!names.empty(), "cone combine: no inputs");
    std::vector<Matrix> blocks;
    for (const std::string& s : names) blocks.push_back(read_matrix(s));
    Matrix upsilon = read_matrix(combine_isometry);
    CombineMode mode = CombineMode::Isometry;
    if (combine_mode == "fullrank") mode = CombineMode::FullRank;
    else require(combine_mode == "isometry",
                 "cone combine: mode must be isometry or fullrank");
    Matrix combined;
    if (combine_structured.empty()) {
      combined = matrix_convex_combine(blocks, upsilon, mode, opt.tol);
    } else {
      std::istringstream is(combine_structured);
      int n = 0, m = 0;
      char comma = 0;
      require(bool(is >> n >> comma >> m) && comma == ',',
              "cone combine: --structured expects 'n,m'");
      Eigen::Index k = Eigen::Index(blocks.size());
      require(upsilon.rows() == k * (n + m) && upsilon.cols() == n + m,
              "cone combine: structured isometry must be k(n+m) x (n+m)");
      std::vector<Matrix> vn, vm;
      for (Eigen::Index jb = 0; jb < k; ++jb) {
        vn.push_back(upsilon.block(jb * (n + m), 0, n, n));
        vm.push_back(upsilon.block(jb * (n + m) + n, n, m, m));
      }
      StructuredIsometry iso = structured_isometry(vn, vm, mode, opt.tol);
      combined = nm_matrix_convex_combine(blocks, iso);
    }
    result.payload = Json{{"combined", matrix_to_json(combined)}};
    result.status = "ok";
  });

  // ---- sign ---------------------------------------------------------------
  std::string sign_input;
  CLI::App* sign_cmd =
      app.add_subcommand("sign", "matrix sign function (involution factor)");
  sign_cmd->add_option("--matrix", sign_input, "square matrix")->required();
  add_common(sign_cmd);
  sign_cmd->callback([&] {
    Matrix a = read_matrix(sign_input);
    SignMatrixOptions so;
    so.tol = opt.tol;
    SignMatrixResult e = sign_matrix_full(a, so);
    result.payload = Json{{"E", matrix_to_json(e.E)},
                          {"used_newton", e.used_newton},
                          {"newton_iterations", e.newton_iterations},
                          {"eigenvector_condition", e.eigenvector_condition}};
    result.status = "ok";
  });

  // ---- pr -----------------------------------------------------------------
  CLI::App* pr = app.add_subcommand("pr", "positive-reality analysis");
  pr->require_subcommand(1);

  std::string pr_function, pr_grid;
  CLI::App* pr_check_cmd =
      pr->add_subcommand("check", "verify positive-reality of a function");
  pr_check_cmd->add_option("--function", pr_function, "rational matrix")
      ->required();
  pr_check_cmd->add_option("--grid", pr_grid, "sampling-grid overrides");
  add_common(pr_check_cmd);
  pr_check_cmd->callback([&] {
    RationalMatrix f = read_ratfun(pr_function);
    Json grid_json = pr_grid.empty() ? Json() : read_json_arg(pr_grid);
    PrVerdict v = pr_check(f, cli_detail::grid_from_json(grid_json, opt.tol));
    result.payload = cli_detail::pr_verdict_to_json(v);
    result.status = v.is_pr ? "ok" : "refuted";
  });

  int cic_depth = 4, cic_count = 10, cic_m = 1;
  CLI::App* pr_cic =
      pr->add_subcommand("cic-sample", "sample cone expressions and verify");
  pr_cic->add_option("--depth", cic_depth, "maximum tree depth");
  pr_cic->add_option("--count", cic_count, "number of samples");
  pr_cic->add_option("--m", cic_m, "matrix size of the evaluation");
  pr_cic->add_option("--seed", opt.seed, "base seed");
  add_common(pr_cic);
  pr_cic->callback([&] {
    require(cic_depth >= 0 && cic_count >= 1 && cic_m >= 1,
            "pr cic-sample: depth >= 0, count >= 1, m >= 1");
    Json trees = Json::array();
    bool all_pr = true;
    for (int i = 0; i < cic_count; ++i) {
      std::uint64_t seed = opt.seed + std::uint64_t(i);
      CicExpression e = cic_sample(cic_depth, seed, cic_m);
      RationalMatrix f = cic_eval(e);
      PrVerdict v = pr_check(f);
      all_pr = all_pr && v.is_pr;
      trees.push_back(Json{{"seed", seed},
                           {"nodes", cic_node_count(e)},
                           {"degree", f.max_degree()},
                           {"is_pr", v.is_pr}});
    }
    result.payload = Json{{"count", cic_count},
                          {"depth", cic_depth},
                          {"all_positive_real", all_pr},
                          {"trees", trees}};
    result.status = all_pr ? "ok" : "refuted";
  });

  std::string circuit_spec;
  CLI::App* pr_circuit =
      pr->add_subcommand("circuit", "driving-point impedance of a ladder");
  pr_circuit->add_option("--spec", circuit_spec, "circuit description")
      ->required();
  add_common(pr_circuit);
  pr_circuit->callback([&] {
    CircuitSpec spec = circuit_from_json(read_json_arg(circuit_spec));
    RationalMatrix z = ladder_impedance(spec);
    PrVerdict v = pr_check(z);
    result.payload = Json{{"impedance", rational_matrix_to_json(z)},
                          {"pr", cli_detail::pr_verdict_to_json(v)}};
    result.status = v.is_pr ? "ok" : "refuted";
  });

  std::vector<std::string> network_blocks;
  CLI::App* pr_network =
      pr->add_subcommand("network", "two-port feedback interconnection");
  pr_network
      ->add_option("--blocks", network_blocks,
                   "four rational matrices Fa, Fb, Fc, Fd")
      ->required()
      ->expected(-1);
  add_common(pr_network);
  pr_network->callback([&] {
    std::vector<std::string> names = expand_inputs(network_blocks);
    require(names.size() == 4,
            "pr network: need exactly four blocks Fa, Fb, Fc, Fd");
    RationalMatrix fa = read_ratfun(names[0]);
    RationalMatrix fb = read_ratfun(names[1]);
    RationalMatrix fc = read_ratfun(names[2]);
    RationalMatrix fd = read_ratfun(names[3]);
    RationalMatrix h = feedback_network(fa, fb, fc, fd);
    result.payload = Json{{"network", rational_matrix_to_json(h)}};
    result.status = "ok";
  });

  // ---- real ---------------------------------------------------------------
  CLI::App* real = app.add_subcommand("real", "realization arrays");
  real->require_subcommand(1);

  std::string eval_realization, eval_at;
  CLI::App* real_eval =
      real->add_subcommand("eval", "evaluate the transfer function");
  real_eval->add_option("--realization", eval_realization, "array")
      ->required();
  real_eval->add_option("--at", eval_at, "point 're[,im]'")->required();
  add_common(real_eval);
  real_eval->callback([&] {
    Realization r = read_realization(eval_realization);
    Complex s = cli_detail::parse_point(eval_at);
    TransferValue v = transfer_eval(r, s, opt.tol);
    result.payload = Json{{"at", {s.real(), s.imag()}},
                          {"pole", v.pole},
                          {"sigma_min", v.sigma_min},
                          {"value", matrix_to_json(v.value)}};
    result.status = "ok";
  });

  std::string op_name;
  std::vector<std::string> op_inputs;
  double op_scale = 1.0;
  CLI::App* real_op =
      real->add_subcommand("op", "cone arithmetic on matrix views");
  real_op->add_option("--op", op_name, "scale | sum | invert")->required();
  real_op->add_option("--inputs", op_inputs, "realization arrays")
      ->required()
      ->expected(-1);
  real_op->add_option("--scale", op_scale, "positive factor for --op scale");
  add_common(real_op);
  real_op->callback([&] {
    std::vector<std::string> names = expand_inputs(op_inputs);
    std::vector<Realization> rs;
    for (const std::string& s : names) rs.push_back(read_realization(s));
    RealizationOp op;
    if (op_name == "scale") op = RealizationOp::Scale;
    else if (op_name == "sum") op = RealizationOp::Sum;
    else if (op_name == "invert") op = RealizationOp::Invert;
    else throw Error("real op: --op must be scale, sum, or invert");
    Realization out = realization_matrix_op(rs, op, op_scale, opt.tol);
    result.payload = Json{{"result", realization_to_json(out)}};
    result.status = "ok";
  });

  std::string kyp_realization, kyp_h;
  bool kyp_do_search = false;
  int kyp_max_iter = 500;
  CLI::App* real_kyp =
      real->add_subcommand("kyp", "quadratic certificate check or search");
  real_kyp->add_option("--realization", kyp_realization, "array")->required();
  real_kyp->add_option("--H", kyp_h, "candidate certificate matrix");
  real_kyp->add_flag("--search", kyp_do_search, "search for a certificate");
  real_kyp->add_option("--max-iter", kyp_max_iter, "search iteration budget");
  add_common(real_kyp);
  real_kyp->callback([&] {
    Realization r = read_realization(kyp_realization);
    require(kyp_do_search != !kyp_h.empty(),
            "real kyp: give exactly one of --H or --search");
    if (!kyp_h.empty()) {
      Matrix h = read_matrix(kyp_h);
      KypCertificate cert = kyp_verify(r, h, opt.tol);
      result.payload = Json{{"certificate", certificate_to_json(cert)}};
      result.status = cert.valid ? "ok" : "refuted";
    } else {
      KypSearchResult sr = kyp_search(r, kyp_max_iter, opt.tol);
      result.payload =
          Json{{"outcome", to_string(sr.status)},
               {"iterations", sr.iterations},
               {"final_residual", sr.final_residual},
               {"certificate", certificate_to_json(sr.certificate)}};
      switch (sr.status) {
        case KypSearchStatus::Found:
          result.status = "ok";
          break;
        case KypSearchStatus::Infeasible:
          result.status = "infeasible";
          break;
        case KypSearchStatus::MaxIterations:
          // Budget exhaustion is a non-decision, not an analysis outcome.
          throw Error("kyp search: iteration budget exhausted undecided");
      }
    }
  });

  std::string bal_realization, bal_via;
  CLI::App* real_balance =
      real->add_subcommand("balance", "equalize the system Gramians");
  real_balance->add_option("--realization", bal_realization, "array")
      ->required();
  real_balance->add_option("--via", bal_via,
                           "also run 'sign-iteration' on the balanced H");
  add_common(real_balance);
  real_balance->callback([&] {
    Realization r = read_realization(bal_realization);
    BalancingResult br = gramian_balance(r, opt.tol);
    Json hankel = Json::array();
    for (Eigen::Index i = 0; i < br.hankel.size(); ++i) {
      hankel.push_back(br.hankel(i));
    }
    Json payload{{"balanced", realization_to_json(br.balanced)},
                 {"transform", matrix_to_json(br.transform)},
                 {"gramian", matrix_to_json(br.gramian)},
                 {"hankel", hankel}};
    if (!bal_via.empty()) {
      require(bal_via == "sign-iteration",
              "real balance: --via only supports sign-iteration");
      Matrix h0 = -br.gramian;
      SignIterationResult si =
          sign_iteration(h0, br.balanced.B, br.balanced.C);
      Json steps = Json::array();
      for (const SignIterationStep& st : si.trace) {
        steps.push_back(Json{{"alpha", st.alpha}, {"distance", st.distance}});
      }
      payload["sign_iteration"] = Json{{"steps", si.steps},
                                       {"converged", si.converged},
                                       {"monotone", si.monotone},
                                       {"trace", steps},
                                       {"H", matrix_to_json(si.H)}};
    }
    result.payload = payload;
    result.status = "ok";
  });

  // ---- sim ----------------------------------------------------------------
  CLI::App* sim = app.add_subcommand("sim", "switched-system simulation");
  sim->require_subcommand(1);

  std::string sim_system;
  CLI::App* sim_check = sim->add_subcommand(
      "check", "common quadratic certificate for the family");
  sim_check->add_option("--system", sim_system, "switched system")->required();
  add_common(sim_check);
  sim_check->callback([&] {
    SwitchedSystem sys = system_from_json(read_json_arg(sim_system));
    QuadraticStabilityReport rep = check_quadratic_stability(sys, opt.tol);
    Json members = Json::array();
    for (const ConeMembership& m : rep.per_matrix) {
      members.push_back(membership_to_json(m));
    }
    result.payload =
        Json{{"contained", rep.contained}, {"per_matrix", members}};
    result.status = "ok";
  });

  std::string run_system, run_policy = "fixed", run_x0, run_sequence;
  double run_horizon = 1.0, run_dt = 1e-2, run_dwell = 0.0,
         run_ratio_tol = 1e-7;
  CLI::App* sim_run =
      sim->add_subcommand("run", "simulate and verify the decay envelope");
  sim_run->add_option("--system", run_system, "switched system")->required();
  sim_run->add_option("--policy", run_policy, "fixed | random | greedy");
  sim_run->add_option("--x0", run_x0, "initial state")->required();
  sim_run->add_option("--horizon", run_horizon, "simulated seconds")
      ->required();
  sim_run->add_option("--dt", run_dt, "sampling step")->required();
  sim_run->add_option("--dwell", run_dwell, "fixed-policy dwell seconds");
  sim_run->add_option("--seed", opt.seed, "random-policy seed");
  sim_run->add_option("--sequence", run_sequence,
                      "fixed-policy index cycle, e.g. '0,2,1'");
  sim_run->add_option("--ratio-tol", run_ratio_tol,
                      "envelope violation tolerance");
  sim_run->add_option("--csv", opt.csv_path, "write the trajectory CSV here");
  add_common(sim_run);
  sim_run->callback([&] {
    SwitchedSystem sys = system_from_json(read_json_arg(run_system));
    SwitchPolicy policy;
    if (run_policy == "fixed") policy.kind = SwitchPolicyKind::FixedSequence;
    else if (run_policy == "random") policy.kind = SwitchPolicyKind::RandomDwell;
    else if (run_policy == "greedy") policy.kind = SwitchPolicyKind::Greedy;
    else throw Error("sim run: --policy must be fixed, random, or greedy");
    policy.dwell = run_dwell;
    policy.seed = opt.seed;
    if (!run_sequence.empty()) {
      std::stringstream ss(run_sequence);
      std::string piece;
      while (std::getline(ss, piece, ',')) {
        policy.sequence.push_back(std::stoi(piece));
      }
    }
    Vector x0 = cli_detail::read_state_vector(run_x0);
    Trajectory traj = simulate(sys, policy, x0, run_horizon, run_dt);
    Json schedule = Json::array();
    for (const TrajectorySegment& seg : traj.switch_schedule) {
      schedule.push_back(
          Json{{"duration", seg.duration}, {"index", seg.matrix_index}});
    }
    Json payload{{"samples", traj.times.size()},
                 {"final_norm", traj.norms.back()},
                 {"switch_schedule", schedule}};
    bool h_usable = true;
    if (sys.H) {
      Matrix neg_h = -(*sys.H);
      h_usable = is_hermitian(neg_h, std::sqrt(opt.tol)) &&
                 is_pd(definiteness(neg_h, opt.tol));
    }
    if (h_usable) {
      EnvelopeReport rep = verify_envelope(traj, sys, run_ratio_tol);
      payload["envelope"] = envelope_to_json(rep);
      result.status = rep.violations.empty() ? "ok" : "refuted";
    } else {
      result.diagnostics.push_back(
          "supplied H is not a valid Lyapunov factor; envelope skipped");
      result.status = "ok";
    }
    if (!opt.csv_path.empty()) {
      std::ostringstream csv;
      trajectory_to_csv(traj, csv);
      result.csv_data = csv.str();
    }
    result.payload = payload;
  });

  // ---- parse and execute --------------------------------------------------
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    result.exit_code = (result.status == "error") ? 1 : 0;
  } catch (const CLI::CallForHelp&) {
    result.status = "ok";
    result.payload = Json::object();
    result.diagnostics.push_back(app.help());
    result.exit_code = 0;
  } catch (const CLI::ParseError& e) {
    result.status = "error";
    result.diagnostics.push_back(std::string("argument error: ") + e.what());
    result.exit_code = 1;
  } catch (const Error& e) {
    result.status = "error";
    result.diagnostics.push_back(e.what());
    result.exit_code = 1;
  } catch (const Json::exception& e) {
    result.status = "error";
    result.diagnostics.push_back(std::string("JSON error: ") + e.what());
    result.exit_code = 1;
  }
  result.out_path = opt.out_path;
  result.csv_path = opt.csv_path;
  return result;
}

// Entry point used by the binary: dispatch, write outputs, return the exit
// code.
inline int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  CommandResult result = command_dispatch(args);
  std::string text = result.to_json().dump(2);
  if (!result.out_path.empty()) {
    std::ofstream out(result.out_path);
    if (!out.good()) {
      std::cerr << "cannot write to '" << result.out_path << "'\n";
      return 1;
    }
    out << text << '\n';
  } else {
    std::cout << text << '\n';
  }
  if (!result.csv_path.empty() && !result.csv_data.empty()) {
    std::ofstream csv(result.csv_path);
    if (!csv.good()) {
      std::cerr << "cannot write to '" << result.csv_path << "'\n";
      return 1;
    }
    csv << result.csv_data;
  }
  return result.exit_code;
}

}  // namespace mcic
