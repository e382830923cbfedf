#include "qwalk/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "qwalk/coined_walk.hpp"
#include "qwalk/fsbsw.hpp"
#include "qwalk/ion_rydberg.hpp"
#include "qwalk/matrix_embedding.hpp"
#include "qwalk/qsp.hpp"

namespace qwalk::runner {

using std::numbers::pi;
namespace fs = std::filesystem;

ValidationError::ValidationError(const std::string& what, std::vector<std::string> fields)
    : std::runtime_error(what), fields_(std::move(fields)) {}

SimulationError::SimulationError(const std::string& module, const std::string& what)
    : std::runtime_error(module + ": " + what), module_(module) {}

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const std::vector<std::string> kConfigKeys{"command", "params", "rng_seed", "output", "tol"};

json range_or_list(const json& axis, const std::string& field) {
  if (axis.is_array()) return axis;
  if (axis.is_object()) {
    for (const auto& [key, _] : axis.items()) {
      if (key != "from" && key != "to" && key != "points") {
        throw ValidationError("unknown range key", {field + "." + key});
      }
    }
    if (!axis.contains("from") || !axis.contains("to") || !axis.contains("points")) {
      throw ValidationError("range needs from, to and points", {field});
    }
    const double a = axis["from"].get<double>();
    const double b = axis["to"].get<double>();
    const int n = axis["points"].get<int>();
    if (n < 1) throw ValidationError("range needs at least one point", {field + ".points"});
    json out = json::array();
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  throw ValidationError("expected an array or a {from, to, points} range", {field});
}

bool compatible(const json& def, const json& value) {
  if (def.is_null()) return true;
  if (def.is_number()) return value.is_number();
  if (def.is_array()) return value.is_array() || value.is_number();
  if (def.is_object()) return value.is_object() || value.is_null();
  return def.type() == value.type();
}

// Merged params with defaults; unknown or mistyped entries are collected.
json merge_params(const std::string& command, const json& given) {
  json merged = default_params(command);
  if (!given.is_object()) throw ValidationError("params must be an object", {"params"});
  std::vector<std::string> bad;
  for (const auto& [key, value] : given.items()) {
    if (!merged.contains(key)) {
      bad.push_back("params." + key);
      continue;
    }
    if (!compatible(merged[key], value)) {
      bad.push_back("params." + key);
      continue;
    }
    merged[key] = value;
  }
  if (!bad.empty()) {
    std::string msg = "invalid params for '" + command + "':";
    for (const auto& b : bad) msg += " " + b;
    throw ValidationError(msg, bad);
  }
  return merged;
}

template <typename T>
T param(const json& p, const std::string& key) {
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("params." + key + " has the wrong type", {"params." + key});
  }
}

int odd_positive(const json& p, const std::string& key) {
  const int n = param<int>(p, key);
  if (n < 1 || n % 2 == 0) throw ValidationError("params." + key + " must be a positive odd integer", {"params." + key});
  return n;
}

std::vector<int> int_list(const json& p, const std::string& key) {
  const json& v = p.at(key);
  if (v.is_number()) return {param<int>(p, key)};
  return param<std::vector<int>>(p, key);
}

std::string cell(double v) { return format_number(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(long v) { return std::to_string(v); }

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

template <typename Fn>
auto guarded(const std::string& module, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(module + ": " + e.what(), {"params"});
  } catch (const std::domain_error& e) {
    throw ValidationError(module + ": " + e.what(), {"params"});
  } catch (const std::exception& e) {
    throw SimulationError(module, e.what());
  }
}

// --- walk ---------------------------------------------------------------

void run_walk(const json& p, ResultRecord& rec) {
  const double theta = param<double>(p, "theta");
  const int n = odd_positive(p, "n");
  const double k = param<double>(p, "k");
  const int grid = param<int>(p, "winding_grid");
  const int band_points = param<int>(p, "band_points");
  guarded("coined-walk", [&] {
    const walk::WalkParams wp{theta, k, n};
    const Operator w = walk::walk_sequence(wp);
    rec.scalars["revival_residual"] = walk::revival_residual(theta, n);
    rec.scalars["revival_bound"] = walk::revival_bound(theta, n);
    rec.scalars["unitarity_defect"] = w.unitarity_defect();
    const auto wn = walk::winding_number(theta, grid);
    rec.scalars["winding"] = wn.winding;
    rec.scalars["degenerate"] = wn.degenerate;
    rec.scalars["sequence_diagonal"] = json::array({complex_json(w(0, 0)), complex_json(w(1, 1))});
    if (band_points > 0) {
      CsvTable t{"band", {"k", "energy", "n_x", "n_y", "n_z"}, {}};
      for (int i = 0; i < band_points; ++i) {
        const double kk = 2.0 * pi * i / band_points;
        try {
          const auto bp = walk::band_point(kk, theta);
          t.rows.push_back({cell(kk), cell(bp.energy), cell(bp.axis[0]), cell(bp.axis[1]), cell(bp.axis[2])});
        } catch (const walk::DegeneratePointError&) {
          t.rows.push_back({cell(kk), "nan", "nan", "nan", "nan"});
        }
      }
      rec.tables.push_back(std::move(t));
    }
    return 0;
  });
}

// --- embed --------------------------------------------------------------

void run_embed(const json& p, ResultRecord& rec) {
  const auto g = param<std::vector<double>>(p, "couplings");
  if (g.empty()) throw ValidationError("params.couplings must not be empty", {"params.couplings"});
  const int n = odd_positive(p, "n");
  const double k = param<double>(p, "k");
  const double t = p.at("t").is_null() ? cqed::standard_gate_time(*std::max_element(g.begin(), g.end()))
                                       : param<double>(p, "t");
  guarded("matrix-embedding", [&] {
    const auto sys = embedding::embed(cqed::embedded_matrix(g));
    json values = json::array();
    int dark = 0;
    double worst_bound = 0.0;
    for (const auto& b : sys.blocks) {
      values.push_back(b.value);
      if (b.dark) {
        ++dark;
      } else {
        worst_bound = std::max(worst_bound, embedding::error_bound(b.value, t, n));
      }
    }
    const Operator direct = embedding::evolve_embedded(sys, t);
    const Operator blocks = embedding::evolve_blocks(sys, t);
    const Operator seq = embedding::rotation_sequence(sys, t, k, n);
    const Matrix m = embedding::ancilla_one_block(seq);
    const Matrix ideal = embedding::ideal_rotation(sys, k, n);
    rec.scalars["singular_values"] = values;
    rec.scalars["dark_blocks"] = dark;
    rec.scalars["block_vs_direct"] = operator_norm(Matrix(direct.matrix() - blocks.matrix()));
    rec.scalars["fidelity"] = average_gate_fidelity(m, ideal);
    rec.scalars["deviation"] = operator_norm(Matrix(m - ideal));
    rec.scalars["error_bound"] = worst_bound;
    rec.scalars["t"] = t;
    return 0;
  });
}

// --- cqed ---------------------------------------------------------------

std::vector<double> rwa_couplings(const json& p, std::uint64_t seed) {
  const auto preset = param<std::string>(p, "preset");
  if (preset == "homogeneous") return std::vector<double>(4, 1.0);
  if (preset == "inhomogeneous") return cqed::preset_inhomogeneous_couplings();
  if (preset == "random") {
    return cqed::gaussian_draws(seed, param<int>(p, "n_neighbors"), 1.0, param<double>(p, "rel_sd"));
  }
  if (preset == "custom") {
    if (p.at("couplings").is_null()) throw ValidationError("preset custom needs params.couplings", {"params.couplings"});
    auto g = param<std::vector<double>>(p, "couplings");
    if (g.empty()) throw ValidationError("params.couplings must not be empty", {"params.couplings"});
    return g;
  }
  throw ValidationError("unknown preset '" + preset + "'", {"params.preset"});
}

void run_cqed_rwa(const json& p, ResultRecord& rec, std::uint64_t seed) {
  const auto g = rwa_couplings(p, seed);
  const auto ns = int_list(p, "n");
  for (int n : ns) {
    if (n < 1 || n % 2 == 0) throw ValidationError("params.n must hold positive odd integers", {"params.n"});
  }
  const double k = param<double>(p, "k");
  const double gmax = *std::max_element(g.begin(), g.end());
  const double t_g = p.at("t_g").is_null() ? cqed::standard_gate_time(gmax) : param<double>(p, "t_g");
  const bool single = p.at("n").is_number();
  guarded("cqed-sim", [&] {
    rec.scalars["couplings"] = g;
    rec.scalars["t_g"] = t_g;
    rec.scalars["units"] = "couplings and 1/t_g in the same unit (g = 1)";
    CsvTable table{"fidelity", {"n", "fidelity", "phi_star", "leakage"}, {}};
    json points = json::array();
    for (int n : ns) {
      const auto r = cqed::simulate_rwa_sequence(g, n, k, t_g);
      points.push_back({{"n", n}, {"fidelity", r.fidelity}, {"phi_star", r.phi_star}, {"leakage", r.leakage}});
      table.rows.push_back({cell(n), cell(r.fidelity), cell(r.phi_star), cell(r.leakage)});
      if (single) {
        rec.scalars["fidelity"] = r.fidelity;
        rec.scalars["phi_star"] = r.phi_star;
        rec.scalars["leakage"] = r.leakage;
      }
    }
    rec.scalars["points"] = points;
    rec.tables.push_back(std::move(table));
    if (!p.at("k_sweep").is_null()) {
      const json ks = range_or_list(p.at("k_sweep"), "params.k_sweep");
      CsvTable sw{"k_sweep", {"k", "fidelity_sequence", "fidelity_closed_form"}, {}};
      for (const auto& kv : ks) {
        const double kk = kv.get<double>();
        const double f = cqed::simulate_rwa_sequence(g, 3, kk, t_g).fidelity;
        const double fc = cqed::closed_form_rotation_fidelity(kk, t_g, g).fidelity;
        sw.rows.push_back({cell(kk), cell(f), cell(fc)});
      }
      rec.tables.push_back(std::move(sw));
    }
    return 0;
  });
}

void run_cqed_full(const json& p, ResultRecord& rec) {
  const double g_mhz = param<double>(p, "g_mhz");
  if (!(g_mhz > 0.0)) throw ValidationError("params.g_mhz must be positive", {"params.g_mhz"});
  const int n = odd_positive(p, "n");
  const int local_dim = param<int>(p, "local_dim");
  cqed::LatticeSpec spec;
  if (!p.at("lattice_file").is_null()) {
    const auto path = param<std::string>(p, "lattice_file");
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open lattice file " + path, {"params.lattice_file"});
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("lattice file is not valid JSON: ") + e.what(), {"params.lattice_file"});
    }
    if (!j.contains("rabi_coupling_ghz") && !j.contains("coupling_ghz")) {
      j["rabi_coupling_ghz"] = std::vector<double>(j.value("anharm_ghz", json::array()).size() - 1, g_mhz / 1000.0);
    }
    if (!j.contains("local_dim")) j["local_dim"] = local_dim;
    spec = lattice_from_json(j);
  } else {
    spec = lattice_preset(param<std::string>(p, "lattice"), g_mhz, local_dim);
  }
  const double g_ang = 2.0 * pi * g_mhz / 1000.0;
  const double t_g = p.at("t_g_ns").is_null() ? cqed::standard_gate_time(g_ang) : param<double>(p, "t_g_ns");
  cqed::FullOptions opts;
  opts.phi_scan = param<int>(p, "phi_scan");
  opts.k = param<double>(p, "k");
  if (opts.phi_scan < 8) throw ValidationError("params.phi_scan must be >= 8", {"params.phi_scan"});
  guarded("cqed-sim", [&] {
    rec.scalars["lattice"] = lattice_to_json(spec);
    rec.scalars["warnings"] = spec.warnings();
    rec.scalars["resonance_mismatch_ghz"] = spec.resonance_mismatch_ghz();
    rec.scalars["units"] = "frequencies GHz (value/2pi), g_mhz MHz (value/2pi), times ns";
    rec.scalars["t_g_ns"] = t_g;
    if (param<bool>(p, "sequence")) {
      const auto r = cqed::simulate_full_sequence(spec, n, t_g, opts);
      rec.scalars["fidelity"] = r.fidelity;
      rec.scalars["phi_star"] = r.phi_star;
      rec.scalars["leakage"] = r.leakage;
      rec.scalars["beta"] = r.beta;
      rec.scalars["total_time_ns"] = 2.0 * n * t_g;
    }
    if (param<bool>(p, "probe")) {
      const int samples = param<int>(p, "probe_samples");
      std::vector<double> times;
      for (int i = 0; i < samples; ++i) times.push_back(pi / g_ang * i / std::max(1, samples - 1));
      std::vector<std::vector<int>> states;
      for (const auto& s : param<std::vector<std::string>>(p, "probe_states")) {
        std::vector<int> digits;
        for (char c : s) {
          if (c < '0' || c > '9') throw ValidationError("probe state labels are digit strings", {"params.probe_states"});
          digits.push_back(c - '0');
        }
        states.push_back(std::move(digits));
      }
      const auto traces = cqed::probe_initial_states(spec, states, times);
      CsvTable t{"traces", {"time_ns", "state_label", "population"}, {}};
      json summary = json::object();
      for (const auto& tr : traces) {
        for (std::size_t i = 0; i < times.size(); ++i) {
          t.rows.push_back({cell(times[i]), tr.label, cell(tr.population[i])});
        }
        summary[tr.label] = {{"min", *std::min_element(tr.population.begin(), tr.population.end())},
                             {"at_half_pi_over_g", cqed::probe_initial_states(spec, {tr.state}, {pi / (2.0 * g_ang)})
                                                       .front()
                                                       .population.front()}};
      }
      rec.scalars["probe"] = summary;
      rec.tables.push_back(std::move(t));
    }
    return 0;
  });
}

// --- qsp ----------------------------------------------------------------

void run_qsp(const json& p, ResultRecord& rec, std::uint64_t seed) {
  const auto name = param<std::string>(p, "target");
  qsp::TargetPolynomial target;
  if (name == "P_ab") {
    target = qsp::target_poly_ab(param<double>(p, "a"), param<double>(p, "b"));
  } else if (name == "P_a") {
    target = qsp::target_poly_a(param<double>(p, "a"));
  } else {
    throw ValidationError("unknown target '" + name + "' (expected P_ab or P_a)", {"params.target"});
  }
  const int degree = p.at("degree").is_null() ? target.degree : param<int>(p, "degree");
  const auto signal = param<std::string>(p, "signal");
  if (signal != "homogeneous" && signal != "ion") {
    throw ValidationError("params.signal must be homogeneous or ion", {"params.signal"});
  }
  const int n_qubits = param<int>(p, "n_qubits");
  if (n_qubits < 1 || n_qubits > 24) throw ValidationError("params.n_qubits out of range", {"params.n_qubits"});
  const int x_points = param<int>(p, "x_points");
  guarded("qsp", [&] {
    const auto cond = qsp::check_target(target, degree);
    rec.scalars["target_conditions_ok"] = cond.ok();
    qsp::PhaseSequence seq;
    if (!p.at("phases").is_null()) {
      seq = p.at("phases").get<qsp::PhaseSequence>();
      rec.scalars["phase_source"] = "given";
    } else {
      qsp::FindOptions opts;
      opts.seed = seed;
      opts.restarts = param<int>(p, "restarts");
      const auto found = qsp::find_phases(target, degree, opts);
      if (!found.converged) throw std::runtime_error("phase finding did not converge: " + found.message);
      seq = found.seq;
      rec.scalars["phase_source"] = "find_phases";
      rec.scalars["attempts"] = found.attempts;
    }
    const auto grid = qsp::chebyshev_grid(201);
    rec.scalars["phases"] = seq;
    rec.scalars["residual"] = qsp::sup_residual(seq, target, grid);
    rec.scalars["response_at_one"] = complex_json(qsp::qsp_response(seq, 1.0));

    std::vector<qsp::SignalBlock> blocks;
    if (signal == "homogeneous") {
      const double t = param<double>(p, "t");
      for (const auto& [lambda, mult] : qsp::homogeneous_singular_values(n_qubits)) {
        blocks.push_back({std::cos(lambda * t), mult, lambda == 0.0});
      }
      rec.scalars["t"] = t;
    } else {
      const double theta = param<double>(p, "theta");
      long binom = 1;
      for (int m = 0; m <= n_qubits; ++m) {
        const double lambda = 0.5 * (n_qubits - 2 * m);
        blocks.push_back({std::cos(theta * lambda / 2.0), binom, lambda == 0.0});
        binom = binom * (n_qubits - m) / (m + 1);
      }
      rec.scalars["theta"] = theta;
    }
    rec.scalars["fidelity"] = qsp::qsp_reflection_fidelity(seq, blocks);

    if (name == "P_ab") {
      const auto printed = qsp::printed_phases_062_03();
      rec.scalars["printed_phases"] = printed;
      rec.scalars["printed_residual"] = qsp::sup_residual(printed, qsp::target_poly_ab(0.62, 0.3), grid);
    }
    const auto walk = qsp::walk_phase_sequence(5);
    CsvTable t{"polynomials", {"x", "target", "p_tw", "walk_response", "response_re", "response_im"}, {}};
    for (int i = 0; i < x_points; ++i) {
      const double x = x_points == 1 ? 0.0 : -1.0 + 2.0 * i / (x_points - 1);
      const cplx r = qsp::qsp_response(seq, x);
      t.rows.push_back({cell(x), cell(target(x)), cell(2.0 * std::pow(x, 10) - 1.0),
                        cell(qsp::qsp_response(walk, x).real()), cell(r.real()), cell(r.imag())});
    }
    rec.tables.push_back(std::move(t));
    return 0;
  });
}

// --- ion / rydberg ------------------------------------------------------

void run_ion(const json& p, ResultRecord& rec, double tol) {
  if (!p.at("partition").is_null()) {
    const auto weights = param<std::vector<long>>(p, "partition");
    const auto mech = guarded("ion-rydberg", [&] { return ion::parse_mechanism(param<std::string>(p, "mechanism")); });
    guarded("ion-rydberg", [&] {
      const auto r = ion::partition_oracle(weights, mech);
      json states = json::array();
      for (const auto& z : r.zero_sum_states) states.push_back(z);
      rec.scalars["weights"] = weights;
      rec.scalars["mechanism"] = ion::to_string(mech);
      rec.scalars["zero_sum_states"] = states;
      rec.scalars["has_solution"] = r.has_solution;
      rec.scalars["fidelity"] = r.fidelity;
      rec.scalars["theta"] = r.theta;
      rec.scalars["n_steps"] = r.n_steps;
      rec.scalars["note"] = r.note;
      if (mech == ion::Mechanism::qsp) rec.scalars["phases"] = r.phases;
      CsvTable t{"oracle", {"index", "sum", "oracle_re", "oracle_im", "target"}, {}};
      for (Eigen::Index c = 0; c < r.oracle.size(); ++c) {
        t.rows.push_back({cell(static_cast<long>(c)), cell(ion::signed_sum(weights, static_cast<std::size_t>(c))),
                          cell(r.oracle(c).real()), cell(r.oracle(c).imag()), cell(r.target(c).real())});
      }
      rec.tables.push_back(std::move(t));
      return 0;
    });
    return;
  }
  const int nq = param<int>(p, "n_neighbors");
  const double theta = param<double>(p, "theta");
  const int n = odd_positive(p, "n");
  const double phi = param<double>(p, "phi");
  const auto anc = param<std::string>(p, "ancilla");
  if (anc != "0" && anc != "1") throw ValidationError("params.ancilla must be \"0\" or \"1\"", {"params.ancilla"});
  guarded("ion-rydberg", [&] {
    const auto r = ion::ion_reflection(nq, theta, n, phi, anc == "1");
    rec.scalars["fidelity"] = r.fidelity;
    rec.scalars["bound"] = r.bound;
    rec.scalars["balanced_dimension"] = r.balanced_dimension;
    if (nq <= 6) {
      const double defect_w0 = operator_norm(
          Matrix(ion::ion_walk_w0(theta, nq).matrix() - ion::ion_walk_w0_blocks(theta, nq).matrix()));
      const double defect_step = operator_norm(Matrix(ion::ion_walk_step(theta, phi, nq).matrix() -
                                                      ion::ion_walk_step_blocks(theta, phi, nq).matrix()));
      rec.scalars["dual_construction_defect"] = std::max(defect_w0, defect_step);
      rec.scalars["dual_construction_ok"] = std::max(defect_w0, defect_step) < std::max(tol, 1e-10);
    }
    return 0;
  });
}

void run_rydberg(const json& p, ResultRecord& rec, std::uint64_t seed, double tol) {
  std::vector<double> v;
  if (p.at("couplings").is_null()) {
    const int nq = param<int>(p, "n_neighbors");
    if (nq < 1 || nq > ion::kMaxDenseNeighbors) throw ValidationError("params.n_neighbors out of range", {"params.n_neighbors"});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    for (int j = 0; j < nq; ++j) v.push_back(dist(rng));
  } else {
    v = param<std::vector<double>>(p, "couplings");
  }
  const double t = param<double>(p, "t");
  const double phi = param<double>(p, "phi");
  guarded("ion-rydberg", [&] {
    const Operator a = ion::rydberg_walk_w0(v, t, phi);
    const Operator b = ion::rydberg_walk_w0_blocks(v, t, phi);
    const double defect = operator_norm(Matrix(a.matrix() - b.matrix()));
    rec.scalars["couplings"] = v;
    rec.scalars["dual_construction_defect"] = defect;
    rec.scalars["dual_construction_ok"] = defect < std::max(tol, 1e-10);
    rec.scalars["unitarity_defect"] = a.unitarity_defect();
    return 0;
  });
}

// --- fsbsw --------------------------------------------------------------

void run_fsbsw(const json& p, ResultRecord& rec, double tol) {
  const int n = param<int>(p, "n");
  const auto nots = param<std::vector<int>>(p, "not_qubits");
  const int walk_n = odd_positive(p, "walk_n");
  guarded("fsbsw-baseline", [&] {
    const auto seq = fsbsw::build_fsbsw_sequence(n);
    json gates = json::array();
    for (const auto& s : seq.steps) {
      if (s.is_not) {
        gates.push_back({{"not", s.qubit}});
      } else {
        gates.push_back({{"pair", {s.gate.first, s.gate.second}},
                         {"duration_pi_over_g", s.gate.duration},
                         {"transition", s.gate.transition == fsbsw::Transition::to02 ? "11-02" : "11-20"}});
      }
    }
    rec.scalars["gates"] = gates;
    rec.scalars["duration_pi_over_g"] = seq.duration();
    rec.scalars["expected_duration_pi_over_g"] = 2 * n - 3;
    std::vector<int> expected = seq.flipped;
    for (int q : nots) {
      if (q >= 0 && q < n) expected[q] ^= 1;
    }
    rec.scalars["flipped_state"] = expected;
    if (n <= 7) {
      const auto summary = fsbsw::summarize(fsbsw::simulate_fsbsw(seq, nots), n, std::max(tol, 1e-12));
      json minus = json::array();
      for (const auto& b : summary.minus_one) minus.push_back(b);
      rec.scalars["minus_one_states"] = minus;
      rec.scalars["max_offdiag"] = summary.max_offdiag;
      rec.scalars["phase_flip_verified"] =
          summary.diagonal_pm_one && summary.minus_one.size() == 1 && summary.minus_one.front() == expected;
    }
    CsvTable t{"cost", {"method", "n", "two_qubit_time_cz", "single_qubit_count", "note"}, {}};
    for (const auto& r : fsbsw::cost_comparison(n, walk_n)) {
      t.rows.push_back({r.method, cell(r.n), cell(r.two_qubit_time_cz),
                        r.single_qubit_count ? cell(*r.single_qubit_count) : "", r.note});
    }
    rec.tables.push_back(std::move(t));
    return 0;
  });
}

// --- sweep --------------------------------------------------------------

void run_sweep(const ExperimentConfig& cfg, const json& p, ResultRecord& rec) {
  const json& base = p.at("base");
  if (!base.is_object() || !base.contains("command")) {
    throw ValidationError("params.base must be a config object with a command", {"params.base"});
  }
  json base_cfg = base;
  if (!base_cfg.contains("rng_seed")) base_cfg["rng_seed"] = cfg.rng_seed;
  if (!base_cfg.contains("tol")) base_cfg["tol"] = cfg.tol;
  const auto sub = ExperimentConfig::from_json(base_cfg);
  if (sub.command == "sweep") throw ValidationError("nested sweeps are not supported", {"params.base.command"});
  const int workers = param<int>(p, "workers");
  if (workers < 1) throw ValidationError("params.workers must be >= 1", {"params.workers"});
  const json& grid = p.at("grid");
  const auto records = sweep(sub, grid, workers, cfg.output.empty() ? fs::path{} : fs::path(cfg.output) / "points");

  std::vector<std::string> axes;
  for (const auto& [key, _] : grid.items()) axes.push_back(key);
  std::set<std::string> keys;
  for (const auto& r : records) {
    for (const auto& [key, value] : r.scalars.items()) {
      if (value.is_number() || value.is_boolean()) keys.insert(key);
    }
  }
  CsvTable t{"sweep", axes, {}};
  t.header.insert(t.header.end(), keys.begin(), keys.end());
  json points = json::array();
  for (const auto& r : records) {
    std::vector<std::string> row;
    for (const auto& a : axes) row.push_back(r.config["params"][a].dump());
    for (const auto& k : keys) {
      const json& v = r.scalars.contains(k) ? r.scalars[k] : json();
      row.push_back(v.is_number() ? format_number(v.get<double>()) : v.is_boolean() ? (v.get<bool>() ? "true" : "false") : "");
    }
    t.rows.push_back(std::move(row));
    points.push_back(r.payload());
  }
  rec.scalars["n_points"] = records.size();
  rec.scalars["points"] = points;
  rec.tables.push_back(std::move(t));
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object", {"<root>"});
  std::vector<std::string> bad;
  for (const auto& [key, _] : j.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) bad.push_back(key);
  }
  if (!bad.empty()) {
    std::string msg = "unknown config fields:";
    for (const auto& b : bad) msg += " " + b;
    throw ValidationError(msg, bad);
  }
  ExperimentConfig cfg;
  try {
    if (!j.contains("command")) throw ValidationError("missing command", {"command"});
    cfg.command = j.at("command").get<std::string>();
    if (j.contains("params")) cfg.params = j.at("params");
    if (j.contains("rng_seed")) cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field has the wrong type: ") + e.what(), {"<root>"});
  }
  const auto cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end()) {
    throw ValidationError("unknown command '" + cfg.command + "'", {"command"});
  }
  if (!cfg.params.is_object()) throw ValidationError("params must be an object", {"params"});
  if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive", {"tol"});
  return cfg;
}

json ExperimentConfig::to_json() const {
  return {{"command", command}, {"params", params}, {"rng_seed", rng_seed}, {"output", output}, {"tol", tol}};
}

std::string CsvTable::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
  return os.str();
}

json ResultRecord::payload() const {
  json tables_json = json::array();
  for (const auto& t : tables) tables_json.push_back(t.name + ".csv");
  return {{"artifact_version", kArtifactVersion}, {"config", config}, {"scalars", scalars}, {"tables", tables_json}};
}

json ResultRecord::to_json() const {
  json j = payload();
  j["wall_clock_s"] = wall_clock_s;
  return j;
}

std::vector<std::string> commands() {
  return {"walk", "embed", "cqed-rwa", "cqed-full", "qsp", "ion", "rydberg", "fsbsw", "sweep"};
}

json default_params(const std::string& command) {
  if (command == "walk") {
    return {{"theta", 2.0 * pi / 3.0}, {"n", 3}, {"k", 0.0}, {"winding_grid", 256}, {"band_points", 0}};
  }
  if (command == "embed") {
    return {{"couplings", {1.0, 1.0, 1.0, 1.0}}, {"t", nullptr}, {"k", 0.0}, {"n", 3}};
  }
  if (command == "cqed-rwa") {
    return {{"preset", "homogeneous"}, {"couplings", nullptr}, {"n", {3, 5, 7}}, {"k", 0.0}, {"t_g", nullptr},
            {"k_sweep", nullptr}, {"n_neighbors", 4}, {"rel_sd", 0.1}};
  }
  if (command == "cqed-full") {
    return {{"lattice", "transmon-star"}, {"lattice_file", nullptr}, {"g_mhz", 2.0}, {"n", 5},
            {"phi_scan", 720}, {"k", 0.0}, {"local_dim", 3}, {"t_g_ns", nullptr}, {"sequence", true},
            {"probe", false}, {"probe_samples", 401}, {"probe_states", {"11000", "10000", "11111"}}};
  }
  if (command == "qsp") {
    return {{"target", "P_ab"}, {"a", 0.62}, {"b", 0.3}, {"degree", nullptr}, {"phases", nullptr},
            {"signal", "homogeneous"}, {"t", 0.88}, {"theta", pi / 2.0}, {"n_qubits", 6},
            {"restarts", 60}, {"x_points", 101}};
  }
  if (command == "ion") {
    return {{"n_neighbors", 4}, {"theta", 2.0 * pi / 3.0}, {"n", 7}, {"phi", 0.0}, {"ancilla", "1"},
            {"partition", nullptr}, {"mechanism", "walk"}};
  }
  if (command == "rydberg") {
    return {{"couplings", nullptr}, {"n_neighbors", 2}, {"t", 0.7}, {"phi", 0.4}};
  }
  if (command == "fsbsw") return {{"n", 4}, {"not_qubits", json::array()}, {"walk_n", 5}};
  if (command == "sweep") return {{"base", json::object()}, {"grid", json::object()}, {"workers", 1}};
  throw ValidationError("unknown command '" + command + "'", {"command"});
}

ResultRecord run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const json p = merge_params(config.command, config.params);
  ResultRecord rec;
  ExperimentConfig echo = config;
  echo.params = p;
  rec.config = echo.to_json();
  const auto& c = config.command;
  if (c == "walk") {
    run_walk(p, rec);
  } else if (c == "embed") {
    run_embed(p, rec);
  } else if (c == "cqed-rwa") {
    run_cqed_rwa(p, rec, config.rng_seed);
  } else if (c == "cqed-full") {
    run_cqed_full(p, rec);
  } else if (c == "qsp") {
    run_qsp(p, rec, config.rng_seed);
  } else if (c == "ion") {
    run_ion(p, rec, config.tol);
  } else if (c == "rydberg") {
    run_rydberg(p, rec, config.rng_seed, config.tol);
  } else if (c == "fsbsw") {
    run_fsbsw(p, rec, config.tol);
  } else if (c == "sweep") {
    run_sweep(config, p, rec);
  } else {
    throw ValidationError("unknown command '" + c + "'", {"command"});
  }
  rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<ResultRecord> sweep(const ExperimentConfig& base, const json& grid, int workers,
                                const fs::path& point_dir) {
  if (!grid.is_object() || grid.empty()) throw ValidationError("grid must be a non-empty object", {"params.grid"});
  std::vector<std::string> axes;
  std::vector<json> values;
  for (const auto& [key, axis] : grid.items()) {
    axes.push_back(key);
    values.push_back(range_or_list(axis, "params.grid." + key));
    if (values.back().empty()) throw ValidationError("grid axis is empty", {"params.grid." + key});
  }
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();

  std::vector<ExperimentConfig> points;
  for (std::size_t i = 0; i < total; ++i) {
    ExperimentConfig cfg = base;
    std::size_t rem = i;
    for (std::size_t a = axes.size(); a-- > 0;) {
      cfg.params[axes[a]] = values[a][rem % values[a].size()];
      rem /= values[a].size();
    }
    merge_params(cfg.command, cfg.params);
    points.push_back(std::move(cfg));
  }
  if (!point_dir.empty()) fs::create_directories(point_dir);

  std::vector<ResultRecord> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        out[i] = run(points[i]);
        if (!point_dir.empty()) {
          char name[32];
          std::snprintf(name, sizeof name, "point_%05zu.json", i);
          write_atomic(point_dir / name, out[i].to_json().dump(2) + "\n");
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_outputs(const ResultRecord& record, const fs::path& dir) {
  fs::create_directories(dir);
  write_atomic(dir / "result.json", record.to_json().dump(2) + "\n");
  for (const auto& t : record.tables) write_atomic(dir / (t.name + ".csv"), t.render());
}

cqed::LatticeSpec lattice_from_json(const json& j) {
  static const std::set<std::string> allowed{"name",        "omega0_ghz",   "anharm_ghz", "rabi_coupling_ghz",
                                             "freq_ghz",    "coupling_ghz", "local_dim",  "description"};
  std::vector<std::string> bad;
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) bad.push_back("lattice." + key);
  }
  if (!bad.empty()) throw ValidationError("unknown lattice fields", bad);
  try {
    const int local_dim = j.value("local_dim", 3);
    if (j.contains("freq_ghz")) {
      cqed::LatticeSpec spec;
      spec.freq_ghz = j.at("freq_ghz").get<std::vector<double>>();
      spec.anharm_ghz = j.at("anharm_ghz").get<std::vector<double>>();
      spec.coupling_ghz = j.at("coupling_ghz").get<std::vector<double>>();
      spec.n_neighbors = static_cast<int>(spec.coupling_ghz.size());
      spec.local_dim = local_dim;
      spec.validate();
      return spec;
    }
    return cqed::LatticeSpec::resonant_star(j.at("omega0_ghz").get<double>(),
                                            j.at("anharm_ghz").get<std::vector<double>>(),
                                            j.at("rabi_coupling_ghz").get<std::vector<double>>(), local_dim);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed lattice: ") + e.what(), {"lattice"});
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("invalid lattice: ") + e.what(), {"lattice"});
  }
}

json lattice_to_json(const cqed::LatticeSpec& spec) {
  return {{"freq_ghz", spec.freq_ghz},
          {"anharm_ghz", spec.anharm_ghz},
          {"coupling_ghz", spec.coupling_ghz},
          {"local_dim", spec.local_dim}};
}

cqed::LatticeSpec lattice_preset(const std::string& name, double g_mhz, int local_dim) {
  std::vector<double> anharm;
  if (name == "transmon-star") {
    anharm = cqed::preset_anharmonicities();
  } else if (name == "transmon-star-literal") {
    anharm = cqed::preset_anharmonicities_literal();
  } else {
    throw ValidationError("unknown lattice preset '" + name + "'", {"params.lattice"});
  }
  try {
    return cqed::LatticeSpec::resonant_star(cqed::kPresetOmega0Ghz, anharm,
                                            std::vector<double>(anharm.size() - 1, g_mhz / 1000.0), local_dim);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("invalid lattice: ") + e.what(), {"params.local_dim"});
  }
}

}  // namespace qwalk::runner
