// Copyright 2026 The tpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include "tpulse/calibration.hpp"
#include "tpulse/config.hpp"
#include "tpulse/cost.hpp"
#include "tpulse/csv.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/metrics.hpp"
#include "tpulse/rb.hpp"
#include "tpulse/registry.hpp"
#include "tpulse/sweep.hpp"

namespace tpulse::cli {

namespace fs = std::filesystem;

namespace {

using Metadata = std::map<std::string, std::string>;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_error:
    case ErrorCode::invalid_argument:
      return 2;
    case ErrorCode::calibration_failed:
      return 3;
    case ErrorCode::fit_failed:
      return 4;
    default:
      return 1;
  }
}

std::string filter_label(const std::optional<FilterSpec>& f) {
  return f ? exact_number(f->cutoff_freq) : "none";
}

class Session {
 public:
  Session(ExperimentConfig config, std::string command, std::ostream& out, std::ostream& err)
      : cfg_(std::move(config)), command_(std::move(command)), out_(out), err_(err) {
    model_ = cfg_.model();
    solver_ = cfg_.solver();
    out_dir_ = cfg_.output_dir;
    registry_path_ = fs::path(cfg_.registry);
    if (registry_path_.is_relative()) registry_path_ = out_dir_ / registry_path_;
    registry_ = CalibrationRegistry::load(registry_path_.string());
    if (cfg_.drive_scale <= 0.0) solver_.drive_scale = resolve_drive_scale();
  }

  const ExperimentConfig& cfg() const { return cfg_; }
  const SystemModel& model() const { return model_; }
  const EvolutionConfig& solver() const { return solver_; }
  std::ostream& out() { return out_; }
  std::ostream& log() { return err_; }

  Metadata metadata(const SystemModel& m) const {
    Metadata md = model_metadata(m, solver_);
    md["command"] = command_;
    md["study"] = cfg_.study;
    md["seed"] = std::to_string(cfg_.seed);
    md["drag_interpretation"] = "I cos + Q sin (quadrature on sin)";
    return md;
  }

  void write(const std::string& name, const std::string& text) {
    fs::create_directories(out_dir_);
    const fs::path p = out_dir_ / name;
    std::ofstream f(p);
    f << text;
    if (!f) fail(ErrorCode::io_error, "cannot write '" + p.string() + "'");
    out_ << "wrote " << p.string() << "\n";
  }

  void write_csv(const std::string& name, CsvWriter& w, const Metadata& md) {
    for (const auto& [k, v] : md) w.add_metadata(k, v);
    write(name, w.str());
  }

  GateSetOptions gate_options(WaveformMode drag, WaveformMode cr, double sample_time) const {
    GateSetOptions o;
    o.drag_mode = drag;
    o.drag_length = cfg_.drag_length_ns;
    o.drag_sample_time = sample_time;
    if (cfg_.drag_filter) o.drag_filter = FilterSpec{cfg_.cutoff_mhz, 1};
    o.cr_mode = cr;
    o.cr_amplitude = cfg_.cr_amplitude_mhz;
    o.cr_rise_time = cfg_.cr_rise_ns;
    o.cr_sample_time = sample_time;
    if (cr != WaveformMode::ideal) o.cr_filter = cfg_.filter_spec();
    o.cr_length = cfg_.cr_length_ns;
    o.solver = solver_;
    o.cr.solver = solver_;
    return o;
  }

  GateSetOptions gate_options(WaveformMode mode) const {
    return gate_options(mode, mode, cfg_.sample_time_ns);
  }

  GateSet gate_set(const SystemModel& m, const GateSetOptions& o) {
    const std::string hash = model_hash(m, solver_.drive_scale);
    const std::string label = gate_label(m, o);
    if (auto g = load_gate_set(registry_, hash, label, m.num_qubits())) return *g;
    err_ << "calibrating gate set " << label << "\n";
    GateSet g = calibrate_gate_set(m, o);
    store_gate_set(registry_, hash, label, g);
    save_registry();
    return g;
  }

  void save_registry() {
    fs::create_directories(registry_path_.parent_path().empty() ? fs::path(".")
                                                                : registry_path_.parent_path());
    registry_.save(registry_path_.string());
  }

  const fs::path& registry_path() const { return registry_path_; }

  RbOptions rb_options(const SystemModel& m) const {
    RbOptions o;
    o.backend = RbBackend::pulse;
    o.solver = solver_;
    const bool decays = std::any_of(m.qubits().begin(), m.qubits().end(), [](const auto& q) {
      return std::isfinite(q.t1) || std::isfinite(q.t2);
    });
    if (!decays) o.solver.mode = EvolutionMode::unitary;
    o.threads = cfg_.threads;
    o.bootstrap = cfg_.bootstrap;
    return o;
  }

 private:
  double resolve_drive_scale() {
    const std::string hash = model_hash(model_, 0.0);
    if (const auto* e = registry_.find(hash, "drive_scale", "rabi")) {
      return std::stod(e->at("value"));
    }
    err_ << "calibrating drive scale\n";
    const double s = calibrate_drive_scale(model_.single_qubit(0).without_decoherence(), 0);
    registry_.put(hash, "drive_scale", "rabi", {{"value", exact_number(s)}});
    save_registry();
    return s;
  }

  static std::string gate_label(const SystemModel& m, const GateSetOptions& o) {
    std::string s = std::string("drag:") + to_string(o.drag_mode) + ":T" + exact_number(o.drag_length);
    if (o.drag_mode == WaveformMode::staircase) s += ":ts" + exact_number(o.drag_sample_time);
    if (o.drag_filter) s += ":lpf" + exact_number(o.drag_filter->cutoff_freq);
    if (m.num_qubits() == 2) {
      s += std::string(",cr:") + to_string(o.cr_mode) + ":A" + exact_number(o.cr_amplitude);
      if (o.cr_mode != WaveformMode::square) s += ":R" + exact_number(o.cr_rise_time);
      s += ":L" + exact_number(o.cr_length);
      if (o.cr_mode == WaveformMode::staircase) s += ":ts" + exact_number(o.cr_sample_time);
      if (o.cr_filter) s += ":lpf" + exact_number(o.cr_filter->cutoff_freq);
    }
    return s;
  }

  ExperimentConfig cfg_;
  std::string command_;
  std::ostream& out_;
  std::ostream& err_;
  SystemModel model_;
  EvolutionConfig solver_;
  fs::path out_dir_;
  fs::path registry_path_;
  CalibrationRegistry registry_;
};

void require_two_qubits(const Session& s, const std::string& what) {
  if (s.model().num_qubits() != 2) fail(ErrorCode::config_error, what + " needs system.qubits = 2");
}

// --- RB helpers -------------------------------------------------------------------

struct RbRow {
  std::string label;
  RbResult rb;
};

void write_rb_artifacts(Session& s, const std::string& stem, RbResult& rb, const Metadata& md) {
  for (const auto& [k, v] : md) rb.metadata.emplace(k, v);
  s.write(stem + "_raw.csv", rb.raw_csv());
  s.write(stem + "_summary.json", rb.summary_json());
}

void check_fits(const std::vector<const RbResult*>& results) {
  for (const auto* r : results) {
    if (!r->fit.ok) fail(ErrorCode::fit_failed, "RB decay fit failed: " + r->fit.message);
  }
}

void print_rb(Session& s, const std::string& label, const RbResult& rb) {
  s.out() << label << ": infidelity " << format_number(rb.infidelity) << " +- "
          << format_number(rb.infidelity_std) << " %  (p = " << format_number(rb.fit.decay)
          << (rb.fit.ok ? "" : ", fit flagged") << ")\n";
}

RbResult rb_for(Session& s, const SystemModel& m, const GateSet& g, const std::string& label) {
  s.log() << "running " << m.num_qubits() << "Q RB: " << label << "\n";
  RbResult rb = run_rb(m, g, s.cfg().rb_config(m.num_qubits()), s.rb_options(m));
  print_rb(s, label, rb);
  return rb;
}

// --- studies -------------------------------------------------------------------------

int study_calibrate(Session& s) {
  const GateSet g = s.gate_set(s.model(), s.gate_options(s.cfg().mode));
  CsvWriter w({"gate", "parameter", "value"});
  for (int q = 0; q < g.qubits; ++q) {
    const std::string gate = "x90.q" + std::to_string(q);
    w.add_row({gate, "amplitude_mhz", format_number(g.x90[q].amplitude)});
    w.add_row({gate, "drag_mhz", format_number(g.x90[q].drag)});
    w.add_row({gate, "pulse_length_ns", format_number(g.x90[q].pulse_length)});
    w.add_row({gate, "drive_freq_mhz", format_number(g.drive_freq[q])});
  }
  if (g.cr) {
    w.add_row({"cr", "amplitude_mhz", format_number(g.cr->amplitude)});
    w.add_row({"cr", "duration_ns", format_number(g.cr->duration())});
    w.add_row({"cr", "flat_time_ns", format_number(g.cr->flat_time)});
    w.add_row({"cnot", "average_gate_fidelity", format_number(g.cnot.fidelity)});
  }
  Metadata md = s.metadata(s.model());
  md["waveform_mode"] = to_string(s.cfg().mode);
  md["filter_mhz"] = filter_label(s.cfg().filter_spec());
  s.write_csv("calibration.csv", w, md);
  s.out() << "registry " << s.registry_path().string() << "\n";
  return 0;
}

int study_simulate(Session& s) {
  const auto& cfg = s.cfg();
  PulseProgram program;
  if (cfg.program == "cr") {
    require_two_qubits(s, "program cr");
    const GateSet g = s.gate_set(s.model(), s.gate_options(cfg.mode));
    program.pulses.push_back(g.cr->pulse(0, g.drive_freq[1], 0.0, 0.0));
  } else {
    const SystemModel single = s.model().single_qubit(0);
    GateSet g = s.gate_set(single, s.gate_options(cfg.mode));
    // drive at the dressed frequency of the coupled system
    g.drive_freq[0] = rad_per_ns_to_mhz(dressed_qubit_frequencies(s.model())[0]);
    program = schedule(g, {NativeOp{NativeOp::Kind::x90, 0, 0.0}});
  }
  EvolutionConfig ec = s.solver();
  const double end = program.duration();
  for (double t = 0.0; t <= end + 1e-9; t += cfg.sample_dt_ns) ec.sample_times.push_back(t);
  for (int q = 0; q < s.model().num_qubits(); ++q) {
    ec.observables.emplace_back("z_q" + std::to_string(q), z_operator(s.model(), q));
    ec.observables.emplace_back("p2_q" + std::to_string(q), level_projector(s.model(), q, 2));
  }
  const auto initial = DensityMatrix::basis(s.model(), std::vector<int>(s.model().num_qubits(), 0));
  const EvolutionResult res = evolve(s.model(), program, initial, ec);

  std::vector<std::string> header{"time_ns"};
  header.insert(header.end(), res.samples->names.begin(), res.samples->names.end());
  CsvWriter w(header);
  for (std::size_t i = 0; i < res.samples->times.size(); ++i) {
    std::vector<double> row{res.samples->times[i]};
    for (const auto& series : res.samples->values) row.push_back(series[i]);
    w.add_row(row);
  }
  Metadata md = s.metadata(s.model());
  md["program"] = cfg.program;
  md["waveform_mode"] = to_string(cfg.mode);
  md["initial_state"] = "ground";
  s.write_csv("trajectory_" + cfg.program + ".csv", w, md);
  s.out() << "simulated " << format_number(res.final_time) << " ns, " << res.accepted_steps
          << " steps\n";
  return 0;
}

GateSet ideal_cr(Session& s) {
  return s.gate_set(s.model(), s.gate_options(WaveformMode::ideal));
}

int study_fig4(Session& s, const std::vector<std::optional<FilterSpec>>& filters) {
  require_two_qubits(s, "fig4");
  const auto& cfg = s.cfg();
  const CrTemplate source = *ideal_cr(s).cr;
  SweepSpec range{"sample_time", cfg.sweep_start, cfg.sweep_stop, cfg.sweep_step, "z_error"};
  const auto grid = range.grid();
  for (const auto& f : filters) {
    s.log() << "fig4 sweep, " << grid.size() << " points, filter " << filter_label(f) << "\n";
    SweepResult r = sweep_sampling_time(s.model(), source, grid, f, s.solver(), cfg.threads);
    for (const auto& [k, v] : s.metadata(s.model())) r.metadata.emplace(k, v);
    s.write(f ? "fig4_z_error_filtered.csv" : "fig4_z_error_unfiltered.csv", r.csv());
  }
  return 0;
}

std::vector<double> frontier_amplitudes(const ExperimentConfig& cfg) {
  if (!cfg.frontier_amplitudes_mhz.empty()) return cfg.frontier_amplitudes_mhz;
  std::vector<double> a;
  for (int i = 0; i <= 170; ++i) a.push_back(300.0 + 10.0 * i);
  return a;
}

struct Frontier {
  SweepResult ideal, square;
};

Frontier run_frontier(Session& s, const std::vector<double>& amps) {
  const auto& cfg = s.cfg();
  CrCalibrationOptions co;
  co.solver = s.solver();
  CrTemplate ideal;
  ideal.mode = WaveformMode::ideal;
  ideal.rise_time = cfg.frontier_rise_ns;
  CrTemplate square;
  square.mode = WaveformMode::square;
  square.filter = cfg.filter_spec();
  s.log() << "frontier, " << amps.size() << " amplitudes\n";
  return {sweep_amplitude_length_frontier(s.model(), ideal, amps, co, cfg.threads),
          sweep_amplitude_length_frontier(s.model(), square, amps, co, cfg.threads)};
}

int study_fig5(Session& s) {
  require_two_qubits(s, "fig5");
  const auto amps = frontier_amplitudes(s.cfg());
  const Frontier f = run_frontier(s, amps);
  CsvWriter w({"amplitude_mhz", "ideal_length_ns", "square_length_ns", "ideal_phase_error",
               "square_phase_error", "ideal_ok", "square_ok"});
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const auto& a = f.ideal.points[i];
    const auto& b = f.square.points[i];
    w.add_row({format_number(amps[i]), format_number(a.objective), format_number(b.objective),
               format_number(a.extra.size() > 1 ? a.extra[1] : NAN),
               format_number(b.extra.size() > 1 ? b.extra[1] : NAN), a.ok ? "1" : "0",
               b.ok ? "1" : "0"});
  }
  Metadata md = s.metadata(s.model());
  md["ideal_rise_ns"] = exact_number(s.cfg().frontier_rise_ns);
  md["square_filter_mhz"] = filter_label(s.cfg().filter_spec());
  s.write_csv("fig5_frontier.csv", w, md);
  return 0;
}

int study_custom_sweep(Session& s) {
  const auto& cfg = s.cfg();
  SweepSpec spec{cfg.sweep_parameter, cfg.sweep_start, cfg.sweep_stop, cfg.sweep_step,
                 cfg.sweep_objective};
  spec.validate();
  const GateSet g = s.gate_set(s.model(), s.gate_options(cfg.mode));
  SweepContext ctx;
  ctx.drag = g.x90[0];
  ctx.drag_freq = g.drive_freq[0];
  if (g.cr) ctx.cr = *g.cr;
  ctx.solver = s.solver();
  ctx.rb = cfg.rb_config(1);
  ctx.rb_options = s.rb_options(s.model().single_qubit(0));
  ctx.threads = cfg.threads;
  SweepResult r = run_sweep(s.model(), spec, ctx);
  for (const auto& [k, v] : s.metadata(s.model())) r.metadata.emplace(k, v);
  s.write("sweep_" + spec.parameter + ".csv", r.csv());
  s.out() << "argmin " << spec.parameter << " = " << format_number(r.argmin()) << "\n";
  return 0;
}

int study_table1(Session& s) {
  CsvWriter w({"qubit", "ideal_leakage", "square_leakage", "ideal_amplitude_mhz", "ideal_drag_mhz",
               "square_amplitude_mhz"});
  const auto dressed = dressed_qubit_frequencies(s.model());
  for (int q = 0; q < s.model().num_qubits(); ++q) {
    std::map<WaveformMode, DragCalibration> res;
    for (auto mode : {WaveformMode::ideal, WaveformMode::square}) {
      DragCalibrationOptions o;
      o.mode = mode;
      o.pulse_length = s.cfg().drag_length_ns;
      if (s.cfg().drag_filter) o.filter = FilterSpec{s.cfg().cutoff_mhz, 1};
      o.drive_freq = rad_per_ns_to_mhz(dressed[q]);
      o.solver = s.solver();
      res[mode] = calibrate_drag(s.model(), q, o);
    }
    const auto& i = res[WaveformMode::ideal];
    const auto& sq = res[WaveformMode::square];
    w.add_row({"q" + std::to_string(q), format_number(i.leakage), format_number(sq.leakage),
               format_number(i.pulse.amplitude), format_number(i.pulse.drag),
               format_number(sq.pulse.amplitude)});
    s.out() << "q" << q << ": leakage ideal " << format_number(i.leakage) << ", square "
            << format_number(sq.leakage) << "\n";
  }
  Metadata md = s.metadata(s.model());
  md["initial_state"] = "ground";
  s.write_csv("table1_leakage.csv", w, md);
  return 0;
}

int write_rb_table(Session& s, const std::string& name, std::vector<RbRow>& rows) {
  CsvWriter w({"waveform", "infidelity_pct", "infidelity_std_pct", "decay", "baseline_fixed", "fit_ok"});
  std::vector<const RbResult*> all;
  for (auto& r : rows) {
    w.add_row({r.label, format_number(r.rb.infidelity), format_number(r.rb.infidelity_std),
               format_number(r.rb.fit.decay), r.rb.fit.baseline_fixed ? "1" : "0",
               r.rb.fit.ok ? "1" : "0"});
    all.push_back(&r.rb);
  }
  s.write_csv(name + ".csv", w, s.metadata(s.model()));
  for (auto& r : rows) write_rb_artifacts(s, name + "_" + r.label, r.rb, s.metadata(s.model()));
  check_fits(all);
  return 0;
}

int study_table2(Session& s) {
  const SystemModel single = s.model().single_qubit(0);
  std::vector<RbRow> rows;
  for (auto mode : {WaveformMode::ideal, WaveformMode::square}) {
    const GateSet g = s.gate_set(single, s.gate_options(mode));
    rows.push_back({to_string(mode), rb_for(s, single, g, to_string(mode))});
  }
  return write_rb_table(s, "table2_rb", rows);
}

int study_table5(Session& s) {
  require_two_qubits(s, "table5");
  std::vector<RbRow> rows;
  for (auto mode : {WaveformMode::ideal, WaveformMode::square}) {
    const GateSet g = s.gate_set(s.model(), s.gate_options(WaveformMode::ideal, mode, s.cfg().sample_time_ns));
    const std::string label = mode == WaveformMode::ideal ? "ideal" : "square_lpf";
    rows.push_back({label, rb_for(s, s.model(), g, label)});
  }
  return write_rb_table(s, "table5_rb", rows);
}

GateSet with_cr(const SystemModel& model, GateSet g, const CrTemplate& cr, const EvolutionConfig& solver) {
  g.cr = cr;
  g.cnot = fit_cnot_correction(cr_block(model, g, solver));
  return g;
}

int study_table3(Session& s) {
  require_two_qubits(s, "table3");
  const GateSet base = ideal_cr(s);
  CsvWriter w({"sampling_rate_mhz", "sample_time_ns", "z_error", "cnot_fidelity", "infidelity_pct",
               "infidelity_std_pct", "fit_ok"});
  std::vector<RbRow> rows;
  for (double rate : {1000.0, 1040.0}) {
    CrTemplate t = *base.cr;
    t.mode = WaveformMode::staircase;
    t.sample_time = 1e3 / rate;
    t.filter.reset();
    EvolutionConfig u = s.solver();
    u.mode = EvolutionMode::unitary;
    const double z = z_error(s.model(), t.pulse(0, base.drive_freq[1], 0.0, 0.0), u).value;
    const GateSet g = with_cr(s.model(), base, t, u);
    s.out() << "f_s " << rate << " MHz: z_error " << format_number(z) << "\n";
    RbResult rb = rb_for(s, s.model(), g, "staircase_" + exact_number(rate));
    w.add_row({format_number(rate), format_number(t.sample_time), format_number(z),
               format_number(g.cnot.fidelity), format_number(rb.infidelity),
               format_number(rb.infidelity_std), rb.fit.ok ? "1" : "0"});
    rows.push_back({"fs" + exact_number(rate), std::move(rb)});
  }
  Metadata md = s.metadata(s.model());
  md["filter_mhz"] = "none";
  s.write_csv("table3_staircase.csv", w, md);
  std::vector<const RbResult*> all;
  for (auto& r : rows) {
    write_rb_artifacts(s, "table3_" + r.label, r.rb, md);
    all.push_back(&r.rb);
  }
  check_fits(all);
  return 0;
}

int study_table4(Session& s) {
  require_two_qubits(s, "table4");
  const auto& cfg = s.cfg();
  const GateSet base = ideal_cr(s);
  EvolutionConfig u = s.solver();
  u.mode = EvolutionMode::unitary;
  CrCalibrationOptions co;
  co.solver = s.solver();
  co.drive_freq = base.drive_freq[1];
  CsvWriter w({"waveform", "filter_mhz", "pulse_length_ns", "z_error"});
  auto row = [&](const std::string& label, const CrTemplate& t) {
    const double z = z_error(s.model(), t.pulse(0, base.drive_freq[1], 0.0, 0.0), u).value;
    w.add_row({label, filter_label(t.filter), format_number(t.duration()), format_number(z)});
    s.out() << label << ": T_p " << format_number(t.duration()) << " ns, z_error "
            << format_number(z) << "\n";
  };
  row("ideal", *base.cr);
  const FilterSpec lpf{cfg.cutoff_mhz, 1};
  row("square", calibrate_square_cr_length(s.model(), cfg.cr_amplitude_mhz, std::nullopt, co).pulse);
  row("square", calibrate_square_cr_length(s.model(), cfg.cr_amplitude_mhz, lpf, co).pulse);
  s.write_csv("table4_z_error.csv", w, s.metadata(s.model()));
  return 0;
}

int study_fig6(Session& s) {
  require_two_qubits(s, "fig6");
  const auto& cfg = s.cfg();
  const Frontier f = run_frontier(s, cfg.amplitudes_mhz);
  CsvWriter w({"amplitude_mhz", "waveform", "pulse_length_ns", "cnot_fidelity", "infidelity_pct",
               "infidelity_std_pct", "fit_ok"});
  struct Variant {
    std::string label;
    WaveformMode mode;
    const SweepResult* frontier;
    bool decay;
  };
  const std::vector<Variant> variants{{"ideal", WaveformMode::ideal, &f.ideal, true},
                                      {"square_lpf", WaveformMode::square, &f.square, true},
                                      {"ideal_no_decay", WaveformMode::ideal, &f.ideal, false}};
  std::vector<const RbResult*> all;
  std::vector<LengthFidelityPoint> keep;
  keep.reserve(variants.size() * cfg.amplitudes_mhz.size());
  for (const auto& v : variants) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& p : v.frontier->points) {
      if (p.ok) pairs.emplace_back(p.parameter, p.objective);
    }
    const SystemModel m = v.decay ? s.model() : s.model().without_decoherence();
    GateSetOptions o = s.gate_options(WaveformMode::ideal, v.mode, cfg.sample_time_ns);
    o.cr_rise_time = cfg.frontier_rise_ns;
    s.log() << "fig6 " << v.label << ", " << pairs.size() << " pairs\n";
    auto pts = sweep_length_fidelity(m, pairs, o, cfg.rb_config(2), s.rb_options(m));
    for (auto& p : pts) {
      w.add_row({format_number(p.amplitude), v.label, format_number(p.pulse_length),
                 format_number(p.cnot_fidelity), format_number(p.rb.infidelity),
                 format_number(p.rb.infidelity_std), p.rb.fit.ok ? "1" : "0"});
      print_rb(s, v.label + " A=" + exact_number(p.amplitude), p.rb);
      keep.push_back(std::move(p));
      all.push_back(&keep.back().rb);
    }
  }
  Metadata md = s.metadata(s.model());
  md["ideal_rise_ns"] = exact_number(cfg.frontier_rise_ns);
  md["square_filter_mhz"] = filter_label(cfg.filter_spec());
  s.write_csv("fig6_length_fidelity.csv", w, md);
  check_fits(all);
  return 0;
}

int study_cost(Session& s, const std::vector<PulseCost>& pulses,
               const std::vector<std::pair<std::string, std::vector<std::string>>>& extra = {},
               const std::vector<std::vector<std::string>>& extra_csv = {}) {
  std::vector<CostReport> reports;
  for (const auto& p : reference_profiles()) reports.push_back(waveform_points(p, pulses));
  std::vector<std::string> header{"metric"};
  for (const auto& r : reports) header.push_back(r.profile);
  CsvWriter w(header);
  std::vector<std::string> rate{"sampling_rate_gsps"}, points{"waveform_points"};
  for (const auto& r : reports) {
    rate.push_back(r.sampling_rate ? format_number(*r.sampling_rate) : "NA");
    points.push_back(std::to_string(r.total));
  }
  w.add_row(rate);
  w.add_row(points);
  for (const auto& row : extra_csv) w.add_row(row);
  Metadata md;
  md["version"] = TPULSE_VERSION;
  md["command"] = "cost";
  md["study"] = s.cfg().study;
  md["seed"] = std::to_string(s.cfg().seed);
  std::string workload;
  for (const auto& p : pulses) {
    workload += (workload.empty() ? "" : " ") + p.name + ":" + exact_number(p.pulse_length) + ":" +
                std::to_string(p.quadratures);
  }
  md["workload"] = workload.empty() ? "none" : workload;
  s.write_csv(s.cfg().study == "table6" ? "table6_cost.csv" : "cost.csv", w, md);
  s.out() << cost_table(reports, extra);
  return 0;
}

int study_table6(Session& s, bool with_fidelity) {
  if (!with_fidelity) return study_cost(s, reference_workload());
  require_two_qubits(s, "table6");
  const auto& cfg = s.cfg();
  // shortest calibrated pair of the amplitude list
  const double amp = *std::max_element(cfg.amplitudes_mhz.begin(), cfg.amplitudes_mhz.end());
  struct Column {
    std::string name;
    WaveformMode mode;
    double sample_time;
  };
  std::vector<Column> cols;
  for (const auto& p : reference_profiles()) {
    if (p.mode == GeneratorMode::square) {
      cols.push_back({p.name, WaveformMode::square, cfg.sample_time_ns});
    } else {
      cols.push_back({p.name, WaveformMode::staircase, 1.0 / *p.sampling_rate});
    }
  }
  std::vector<std::string> mean{"infidelity_mean_pct"}, stdev{"infidelity_std_pct"},
      fid{"cnot_fidelity"}, len{"cr_length_ns"};
  std::vector<std::string> t_mean, t_std;
  std::vector<const RbResult*> all;
  std::vector<RbResult> keep;
  keep.reserve(cols.size());
  for (const auto& c : cols) {
    GateSetOptions o = s.gate_options(c.mode, c.mode, c.sample_time);
    o.cr_amplitude = amp;
    o.cr_rise_time = cfg.frontier_rise_ns;
    o.cr_filter = cfg.filter_spec();
    const GateSet g = s.gate_set(s.model(), o);
    keep.push_back(rb_for(s, s.model(), g, c.name));
    const RbResult& rb = keep.back();
    mean.push_back(format_number(rb.infidelity));
    stdev.push_back(format_number(rb.infidelity_std));
    fid.push_back(format_number(g.cnot.fidelity));
    len.push_back(format_number(g.cr->duration()));
    t_mean.push_back(format_number(rb.infidelity));
    t_std.push_back(format_number(rb.infidelity_std));
    all.push_back(&rb);
  }
  study_cost(s, reference_workload(),
             {{"Infidelity (Mean) [%]", t_mean}, {"Infidelity (Std.) [%]", t_std}},
             {mean, stdev, fid, len});
  for (std::size_t i = 0; i < cols.size(); ++i) {
    write_rb_artifacts(s, "table6_" + cols[i].name, keep[i], s.metadata(s.model()));
  }
  check_fits(all);
  return 0;
}

int study_rb_custom(Session& s) {
  const auto& cfg = s.cfg();
  const GateSet g = s.gate_set(s.model(), s.gate_options(cfg.mode));
  RbResult rb = rb_for(s, s.model(), g, to_string(cfg.mode));
  Metadata md = s.metadata(s.model());
  md["waveform_mode"] = to_string(cfg.mode);
  md["filter_mhz"] = filter_label(cfg.filter_spec());
  write_rb_artifacts(s, "rb", rb, md);
  check_fits({&rb});
  return 0;
}

int reproduce(Session& s, const std::string& target) {
  if (target == "table1") return study_table1(s);
  if (target == "table2") return study_table2(s);
  if (target == "table3") return study_table3(s);
  if (target == "table4") return study_table4(s);
  if (target == "table5") return study_table5(s);
  if (target == "table6") return study_table6(s, true);
  if (target == "fig4") return study_fig4(s, {std::nullopt, FilterSpec{s.cfg().cutoff_mhz, 1}});
  if (target == "fig5") return study_fig5(s);
  if (target == "fig6") return study_fig6(s);
  fail(ErrorCode::config_error, "unknown reproduction target '" + target + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmon pulse-level simulator and calibration toolkit", "tpulse"};
  app.set_version_flag("--version", std::string(TPULSE_VERSION));
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output;
  std::optional<std::string> mode;
  std::optional<std::string> study;
  bool no_filter = false;
  bool dump = false;
  app.add_option("--config", config_path, "Configuration file");
  app.add_option("--seed", seed, "Master RB seed");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "Output directory");
  app.add_flag("--no-filter", no_filter, "Disable the CR low-pass filter");
  app.add_option("--mode", mode, "Waveform mode")->check(CLI::IsMember({"ideal", "staircase", "square"}));
  app.add_option("--study", study, "Study name (table1..6, fig4..6, custom)");
  app.add_flag("--dump-config", dump, "Print the effective configuration and exit");

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate the gate set and write the registry");
  auto* simulate = app.add_subcommand("simulate", "Simulate one pulse program, write a trajectory");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps (fig4, fig5, custom)");
  auto* rb = app.add_subcommand("rb", "Randomized benchmarking (table2, table5, table6, fig6, custom)");
  auto* cost = app.add_subcommand("cost", "Waveform-point cost report");
  auto* repro = app.add_subcommand("reproduce", "Run a complete table or figure study");
  std::string target;
  repro->add_option("target", target, "table1..table6, fig4, fig5 or fig6")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "table5", "table6", "fig4",
                             "fig5", "fig6"}));
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << TPULSE_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') cfg.output_dir = env;
    if (output) cfg.output_dir = *output;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (no_filter) cfg.filter = false;
    if (mode) cfg.mode = waveform_mode_from_string(*mode);
    if (study) cfg.study = *study;
    if (repro->parsed()) cfg.study = target;
    cfg.validate();

    if (dump) {
      out << serialize_config(cfg);
      return 0;
    }
    if (app.get_subcommands().empty()) {
      err << "error: a subcommand is required\n" << app.help();
      return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    if (cost->parsed()) {
      // no dynamics needed
      ExperimentConfig c = cfg;
      c.drive_scale = c.drive_scale > 0.0 ? c.drive_scale : 0.5;
      Session s(c, command, out, err);
      return cfg.study == "table6" ? study_table6(s, false) : study_cost(s, cfg.cost_workload());
    }

    Session s(cfg, command, out, err);
    if (calibrate->parsed()) return study_calibrate(s);
    if (simulate->parsed()) return study_simulate(s);
    if (sweep->parsed()) {
      if (cfg.study == "fig4") {
        return study_fig4(s, {cfg.filter ? std::optional(FilterSpec{cfg.cutoff_mhz, 1}) : std::nullopt});
      }
      if (cfg.study == "fig5") return study_fig5(s);
      if (cfg.study == "custom") return study_custom_sweep(s);
      fail(ErrorCode::config_error, "sweep supports studies fig4, fig5 and custom, not '" + cfg.study + "'");
    }
    if (rb->parsed()) {
      if (cfg.study == "table2") return study_table2(s);
      if (cfg.study == "table5") return study_table5(s);
      if (cfg.study == "table6") return study_table6(s, true);
      if (cfg.study == "fig6") return study_fig6(s);
      if (cfg.study == "custom") return study_rb_custom(s);
      fail(ErrorCode::config_error,
           "rb supports studies table2, table5, table6, fig6 and custom, not '" + cfg.study + "'");
    }
    return reproduce(s, target);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tpulse::cli
