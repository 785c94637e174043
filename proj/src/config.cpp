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

#include "tpulse/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw std::invalid_argument("expected a number, got '" + v + "'");
  return x;
}

template <class Int>
Int parse_int(const std::string& v) {
  Int x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw std::invalid_argument("expected on/off, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list item");
    out.push_back(item);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define TP_DOUBLE(sec, key, member)                                                       \
  Field {                                                                                  \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(v); }, \
        [](const ExperimentConfig& c) { return exact_number(c.member); }                  \
  }
#define TP_INT(sec, key, member, type)                                                         \
  Field {                                                                                       \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_int<type>(v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                     \
  }
#define TP_BOOL(sec, key, member)                                                         \
  Field {                                                                                  \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_bool(v); }, \
        [](const ExperimentConfig& c) { return std::string(c.member ? "on" : "off"); }    \
  }
#define TP_STRING(sec, key, member)                                                       \
  Field {                                                                                  \
    sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = v; },             \
        [](const ExperimentConfig& c) { return c.member; }                                 \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f{
        TP_INT("system", "qubits", num_qubits, int),
        TP_DOUBLE("system", "q0_freq_mhz", qubits[0].freq_mhz),
        TP_DOUBLE("system", "q0_anharmonicity_mhz", qubits[0].anharmonicity_mhz),
        TP_DOUBLE("system", "q0_t1_us", qubits[0].t1_us),
        TP_DOUBLE("system", "q0_t2_us", qubits[0].t2_us),
        TP_DOUBLE("system", "q1_freq_mhz", qubits[1].freq_mhz),
        TP_DOUBLE("system", "q1_anharmonicity_mhz", qubits[1].anharmonicity_mhz),
        TP_DOUBLE("system", "q1_t1_us", qubits[1].t1_us),
        TP_DOUBLE("system", "q1_t2_us", qubits[1].t2_us),
        TP_DOUBLE("system", "coupling_mhz", coupling_mhz),
        TP_INT("system", "levels", levels, int),
        TP_BOOL("system", "decoherence", decoherence),
        Field{"pulse", "mode",
              [](ExperimentConfig& c, const std::string& v) {
                try {
                  c.mode = waveform_mode_from_string(v);
                } catch (const Error& e) {
                  throw std::invalid_argument(e.what());
                }
              },
              [](const ExperimentConfig& c) { return std::string(to_string(c.mode)); }},
        TP_BOOL("pulse", "filter", filter),
        TP_BOOL("pulse", "drag_filter", drag_filter),
        TP_DOUBLE("pulse", "cutoff_mhz", cutoff_mhz),
        TP_DOUBLE("pulse", "drag_length_ns", drag_length_ns),
        TP_DOUBLE("pulse", "sample_time_ns", sample_time_ns),
        TP_DOUBLE("pulse", "cr_amplitude_mhz", cr_amplitude_mhz),
        TP_DOUBLE("pulse", "cr_rise_ns", cr_rise_ns),
        TP_DOUBLE("pulse", "cr_length_ns", cr_length_ns),
        TP_STRING("experiment", "study", study),
        TP_STRING("experiment", "sweep_parameter", sweep_parameter),
        TP_STRING("experiment", "sweep_objective", sweep_objective),
        TP_DOUBLE("experiment", "sweep_start", sweep_start),
        TP_DOUBLE("experiment", "sweep_stop", sweep_stop),
        TP_DOUBLE("experiment", "sweep_step", sweep_step),
        Field{"experiment", "amplitudes_mhz",
              [](ExperimentConfig& c, const std::string& v) {
                c.amplitudes_mhz.clear();
                for (const auto& s : split_list(v)) c.amplitudes_mhz.push_back(parse_double(s));
              },
              [](const ExperimentConfig& c) { return join(c.amplitudes_mhz, exact_number); }},
        TP_DOUBLE("experiment", "frontier_rise_ns", frontier_rise_ns),
        Field{"experiment", "frontier_amplitudes_mhz",
              [](ExperimentConfig& c, const std::string& v) {
                c.frontier_amplitudes_mhz.clear();
                for (const auto& s : split_list(v)) c.frontier_amplitudes_mhz.push_back(parse_double(s));
              },
              [](const ExperimentConfig& c) { return join(c.frontier_amplitudes_mhz, exact_number); }},
        TP_STRING("experiment", "program", program),
        TP_DOUBLE("experiment", "sample_dt_ns", sample_dt_ns),
        Field{"experiment", "cost_pulses",
              [](ExperimentConfig& c, const std::string& v) { c.cost_pulses = split_list(v); },
              [](const ExperimentConfig& c) {
                return join(c.cost_pulses, [](const std::string& s) { return s; });
              }},
        Field{"solver", "mode",
              [](ExperimentConfig& c, const std::string& v) {
                try {
                  c.solver_mode = evolution_mode_from_string(v);
                } catch (const Error& e) {
                  throw std::invalid_argument(e.what());
                }
              },
              [](const ExperimentConfig& c) { return std::string(to_string(c.solver_mode)); }},
        TP_DOUBLE("solver", "relative_tolerance", relative_tolerance),
        TP_DOUBLE("solver", "absolute_tolerance", absolute_tolerance),
        TP_DOUBLE("solver", "max_step_ns", max_step_ns),
        TP_DOUBLE("solver", "drive_scale", drive_scale),
        TP_STRING("solver", "frame", frame),
        Field{"rb", "lengths_1q",
              [](ExperimentConfig& c, const std::string& v) {
                c.lengths_1q.clear();
                for (const auto& s : split_list(v)) c.lengths_1q.push_back(parse_int<int>(s));
              },
              [](const ExperimentConfig& c) {
                return join(c.lengths_1q, [](int x) { return std::to_string(x); });
              }},
        Field{"rb", "lengths_2q",
              [](ExperimentConfig& c, const std::string& v) {
                c.lengths_2q.clear();
                for (const auto& s : split_list(v)) c.lengths_2q.push_back(parse_int<int>(s));
              },
              [](const ExperimentConfig& c) {
                return join(c.lengths_2q, [](int x) { return std::to_string(x); });
              }},
        TP_INT("rb", "sequences", sequences, int),
        TP_INT("rb", "seed", seed, std::uint64_t),
        TP_INT("rb", "bootstrap", bootstrap, int),
        TP_STRING("output", "directory", output_dir),
        TP_STRING("output", "registry", registry),
        TP_INT("output", "threads", threads, int),
    };
    return f;
  }();
  return table;
}

#undef TP_DOUBLE
#undef TP_INT
#undef TP_BOOL
#undef TP_STRING

const std::set<std::string> kStudies{"table1", "table2", "table3", "table4", "table5",
                                     "table6", "fig4",   "fig5",   "fig6",   "custom"};
const std::set<std::string> kObjectives{"rotation_angle_error", "conditional_phase_error",
                                        "z_error", "rb_infidelity", "leakage"};

}  // namespace

std::string exact_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::config_error, what); };
  if (num_qubits != 1 && num_qubits != 2) bad("system.qubits must be 1 or 2");
  if (levels < 2) bad("system.levels must be >= 2");
  if (coupling_mhz < 0.0) bad("system.coupling_mhz must be >= 0");
  for (int q = 0; q < num_qubits; ++q) {
    try {
      TransmonParams::from_mhz(qubits[q].freq_mhz, qubits[q].anharmonicity_mhz, qubits[q].t1_us,
                               qubits[q].t2_us, levels)
          .validate();
    } catch (const Error& e) {
      bad("system.q" + std::to_string(q) + ": " + e.what());
    }
  }
  if (!(cutoff_mhz > 0.0)) bad("pulse.cutoff_mhz must be > 0");
  if (!(drag_length_ns > 0.0)) bad("pulse.drag_length_ns must be > 0");
  if (!(sample_time_ns > 0.0)) bad("pulse.sample_time_ns must be > 0");
  if (!(cr_amplitude_mhz > 0.0)) bad("pulse.cr_amplitude_mhz must be > 0");
  if (cr_rise_ns < 0.0) bad("pulse.cr_rise_ns must be >= 0");
  if (cr_length_ns < 0.0) bad("pulse.cr_length_ns must be >= 0");
  if (!kStudies.count(study)) bad("experiment.study '" + study + "' is not a known study");
  if (!kObjectives.count(sweep_objective)) bad("experiment.sweep_objective '" + sweep_objective + "' is unknown");
  if (!(sweep_step > 0.0)) bad("experiment.sweep_step must be > 0");
  if (!(sweep_start < sweep_stop)) bad("experiment.sweep_start must be below sweep_stop");
  for (double a : amplitudes_mhz) if (!(a > 0.0)) bad("experiment.amplitudes_mhz must be > 0");
  for (double a : frontier_amplitudes_mhz) if (!(a > 0.0)) bad("experiment.frontier_amplitudes_mhz must be > 0");
  if (!(frontier_rise_ns >= 0.0)) bad("experiment.frontier_rise_ns must be >= 0");
  try {
    (void)cost_workload();
  } catch (const Error& e) {
    bad(std::string("experiment.cost_pulses: ") + e.what());
  }
  if (program != "x90" && program != "cr") bad("experiment.program must be x90 or cr");
  if (!(sample_dt_ns > 0.0)) bad("experiment.sample_dt_ns must be > 0");
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) bad("solver tolerances must be > 0");
  if (max_step_ns < 0.0) bad("solver.max_step_ns must be >= 0");
  if (drive_scale < 0.0) bad("solver.drive_scale must be >= 0 (0 calibrates)");
  if (frame != "lab") bad("solver.frame: only 'lab' is supported");
  if (sequences < 2) bad("rb.sequences must be >= 2");
  if (bootstrap < 0) bad("rb.bootstrap must be >= 0");
  if (threads < 1) bad("output.threads must be >= 1");
  for (int q : {1, 2}) {
    try {
      rb_config(q).validate();
    } catch (const Error& e) {
      bad("rb.lengths_" + std::to_string(q) + "q: " + e.what());
    }
  }
}

SystemModel ExperimentConfig::model() const {
  std::vector<TransmonParams> qs;
  for (int q = 0; q < num_qubits; ++q) {
    qs.push_back(TransmonParams::from_mhz(qubits[q].freq_mhz, qubits[q].anharmonicity_mhz,
                                          qubits[q].t1_us, qubits[q].t2_us, levels));
  }
  SystemModel m(qs, num_qubits == 2 ? mhz_to_rad_per_ns(coupling_mhz) : 0.0);
  return decoherence ? m : m.without_decoherence();
}

EvolutionConfig ExperimentConfig::solver() const {
  EvolutionConfig c;
  c.mode = solver_mode;
  c.relative_tolerance = relative_tolerance;
  c.absolute_tolerance = absolute_tolerance;
  c.max_step = max_step_ns;
  if (drive_scale > 0.0) c.drive_scale = drive_scale;
  return c;
}

std::optional<FilterSpec> ExperimentConfig::filter_spec() const {
  if (!filter) return std::nullopt;
  return FilterSpec{cutoff_mhz, 1};
}

RbConfig ExperimentConfig::rb_config(int q) const {
  RbConfig c;
  c.qubits = q;
  c.sequence_lengths = q == 1 ? lengths_1q : lengths_2q;
  c.sequences_per_length = sequences;
  c.seed = seed;
  return c;
}

std::vector<PulseCost> ExperimentConfig::cost_workload() const {
  std::vector<PulseCost> out;
  for (const auto& item : cost_pulses) {
    std::vector<std::string> parts;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3 || parts[0].empty()) {
      fail(ErrorCode::config_error, "'" + item + "' is not name:length_ns:quadratures");
    }
    PulseCost c;
    c.name = parts[0];
    try {
      c.pulse_length = parse_double(parts[1]);
      c.quadratures = parse_int<int>(parts[2]);
    } catch (const std::exception& e) {
      fail(ErrorCode::config_error, "'" + item + "': " + e.what());
    }
    if (!(c.pulse_length > 0.0)) fail(ErrorCode::config_error, "'" + item + "': length must be > 0");
    if (c.quadratures != 1 && c.quadratures != 2) {
      fail(ErrorCode::config_error, "'" + item + "': quadratures must be 1 or 2");
    }
    out.push_back(c);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> seen_sections{"system", "pulse", "experiment", "solver", "rb", "output"};
  std::set<std::string> assigned;
  int number = 0;
  auto bad = [&number](const std::string& what) {
    fail(ErrorCode::config_error, "line " + std::to_string(number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') bad("malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!seen_sections.count(section)) bad("unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad("expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) bad("key '" + key + "' outside a section");
    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.section == section && f.key == key) field = &f;
    }
    if (field == nullptr) bad("unknown key '" + key + "' in [" + section + "]");
    if (!assigned.insert(section + "." + key).second) bad("duplicate key '" + key + "'");
    try {
      field->set(c, value);
    } catch (const std::exception& e) {
      bad(key + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_error, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) os << "\n";
      section = f.section;
      os << "[" << section << "]\n";
    }
    os << f.key << " = " << f.get(config) << "\n";
  }
  return os.str();
}

}  // namespace tpulse
