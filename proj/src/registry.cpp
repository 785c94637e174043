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

#include "tpulse/registry.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpulse/config.hpp"
#include "tpulse/errors.hpp"

namespace tpulse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double number(const CalibrationRegistry::Entry& e, const std::string& key) {
  const auto it = e.find(key);
  if (it == e.end()) fail(ErrorCode::config_error, "registry entry lacks '" + key + "'");
  try {
    std::size_t used = 0;
    const double x = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return x;
  } catch (const std::exception&) {
    fail(ErrorCode::config_error, "registry value '" + key + "' is not a number");
  }
}

std::string matrix_text(const Mat2& m) {
  std::string s;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!s.empty()) s += " ";
      s += exact_number(m(i, j).real()) + " " + exact_number(m(i, j).imag());
    }
  }
  return s;
}

Mat2 matrix_value(const CalibrationRegistry::Entry& e, const std::string& key) {
  const auto it = e.find(key);
  if (it == e.end()) fail(ErrorCode::config_error, "registry entry lacks '" + key + "'");
  std::istringstream in(it->second);
  Mat2 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) fail(ErrorCode::config_error, "registry matrix '" + key + "' is malformed");
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

std::string filter_text(const std::optional<FilterSpec>& f) {
  return f ? exact_number(f->cutoff_freq) : "0";
}

std::optional<FilterSpec> filter_value(const CalibrationRegistry::Entry& e) {
  const double c = number(e, "filter_cutoff_mhz");
  if (c <= 0.0) return std::nullopt;
  return FilterSpec{c, 1};
}

}  // namespace

std::string model_hash(const SystemModel& model, double drive_scale) {
  std::string text = exact_number(model.coupling()) + "|" + exact_number(drive_scale);
  for (const auto& q : model.qubits()) {
    text += "|" + exact_number(q.qubit_freq) + "," + exact_number(q.anharmonicity) + "," +
            std::to_string(q.levels);
  }
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void CalibrationRegistry::put(const std::string& model, const std::string& gate,
                              const std::string& mode, Entry entry) {
  for (const auto* s : {&model, &gate, &mode}) {
    if (s->empty() || s->find_first_of(" \t[]=\n") != std::string::npos) {
      fail(ErrorCode::invalid_argument, "registry key '" + *s + "' must be a non-empty word");
    }
  }
  entries_[Key{model, gate, mode}] = std::move(entry);
}

const CalibrationRegistry::Entry* CalibrationRegistry::find(const std::string& model,
                                                            const std::string& gate,
                                                            const std::string& mode) const {
  const auto it = entries_.find(Key{model, gate, mode});
  return it == entries_.end() ? nullptr : &it->second;
}

std::string CalibrationRegistry::str() const {
  std::ostringstream os;
  os << "# tpulse calibration registry\n# version = " << TPULSE_VERSION << "\n";
  for (const auto& [k, e] : entries_) {
    os << "\n[model=" << k.model << " gate=" << k.gate << " mode=" << k.mode << "]\n";
    for (const auto& [name, value] : e) os << name << " = " << value << "\n";
  }
  return os.str();
}

CalibrationRegistry CalibrationRegistry::parse(const std::string& text) {
  CalibrationRegistry r;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  std::optional<Key> current;
  auto bad = [&number](const std::string& what) {
    fail(ErrorCode::config_error, "registry line " + std::to_string(number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') bad("malformed section header");
      std::istringstream words(t.substr(1, t.size() - 2));
      std::map<std::string, std::string> fields;
      std::string w;
      while (words >> w) {
        const auto eq = w.find('=');
        if (eq == std::string::npos) bad("expected name=value in header");
        fields[w.substr(0, eq)] = w.substr(eq + 1);
      }
      if (fields.size() != 3 || !fields.count("model") || !fields.count("gate") || !fields.count("mode")) {
        bad("header needs model=, gate= and mode=");
      }
      current = Key{fields["model"], fields["gate"], fields["mode"]};
      r.entries_[*current];
      continue;
    }
    if (!current) bad("value outside a section");
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad("expected key = value");
    r.entries_[*current][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return r;
}

CalibrationRegistry CalibrationRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void CalibrationRegistry::save(const std::string& path) const {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write registry '" + path + "'");
  out << str();
  if (!out) fail(ErrorCode::io_error, "write failed for registry '" + path + "'");
}

void store_gate_set(CalibrationRegistry& registry, const std::string& model,
                    const std::string& mode, const GateSet& gates) {
  for (int q = 0; q < gates.qubits; ++q) {
    const auto& x = gates.x90[q];
    registry.put(model, "x90.q" + std::to_string(q), mode,
                 {{"waveform", to_string(x.mode)},
                  {"amplitude_mhz", exact_number(x.amplitude)},
                  {"drag_mhz", exact_number(x.drag)},
                  {"pulse_length_ns", exact_number(x.pulse_length)},
                  {"sample_time_ns", exact_number(x.sample_time)},
                  {"filter_cutoff_mhz", filter_text(x.filter)},
                  {"drive_freq_mhz", exact_number(gates.drive_freq[q])}});
  }
  if (gates.cr) {
    const auto& c = *gates.cr;
    registry.put(model, "cr", mode,
                 {{"waveform", to_string(c.mode)},
                  {"amplitude_mhz", exact_number(c.amplitude)},
                  {"rise_time_ns", exact_number(c.rise_time)},
                  {"flat_time_ns", exact_number(c.flat_time)},
                  {"pulse_length_ns", exact_number(c.pulse_length)},
                  {"sample_time_ns", exact_number(c.sample_time)},
                  {"filter_cutoff_mhz", filter_text(c.filter)},
                  {"duration_ns", exact_number(c.duration())}});
    registry.put(model, "cnot", mode,
                 {{"pre_target", matrix_text(gates.cnot.pre_target)},
                  {"post_target", matrix_text(gates.cnot.post_target)},
                  {"control_phase", exact_number(gates.cnot.control_phase)},
                  {"fidelity", exact_number(gates.cnot.fidelity)}});
  }
}

std::optional<GateSet> load_gate_set(const CalibrationRegistry& registry, const std::string& model,
                                     const std::string& mode, int qubits) {
  GateSet g;
  g.qubits = qubits;
  for (int q = 0; q < qubits; ++q) {
    const auto* e = registry.find(model, "x90.q" + std::to_string(q), mode);
    if (e == nullptr) return std::nullopt;
    DragTemplate x;
    x.mode = waveform_mode_from_string(e->count("waveform") ? e->at("waveform") : "");
    x.amplitude = number(*e, "amplitude_mhz");
    x.drag = number(*e, "drag_mhz");
    x.pulse_length = number(*e, "pulse_length_ns");
    x.sample_time = number(*e, "sample_time_ns");
    x.filter = filter_value(*e);
    g.x90.push_back(x);
    g.drive_freq.push_back(number(*e, "drive_freq_mhz"));
  }
  if (qubits == 2) {
    const auto* e = registry.find(model, "cr", mode);
    const auto* n = registry.find(model, "cnot", mode);
    if (e == nullptr || n == nullptr) return std::nullopt;
    CrTemplate c;
    c.mode = waveform_mode_from_string(e->count("waveform") ? e->at("waveform") : "");
    c.amplitude = number(*e, "amplitude_mhz");
    c.rise_time = number(*e, "rise_time_ns");
    c.flat_time = number(*e, "flat_time_ns");
    c.pulse_length = number(*e, "pulse_length_ns");
    c.sample_time = number(*e, "sample_time_ns");
    c.filter = filter_value(*e);
    g.cr = c;
    g.cnot.pre_target = matrix_value(*n, "pre_target");
    g.cnot.post_target = matrix_value(*n, "post_target");
    g.cnot.control_phase = number(*n, "control_phase");
    g.cnot.fidelity = number(*n, "fidelity");
  }
  g.validate();
  return g;
}

}  // namespace tpulse
