#pragma once

// Parameter-sweep front end: sweep specifications, figure presets, a
// deterministic multi-threaded grid runner, and figure-ready CSV/JSON output.

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qhorizon/measures.hpp"

namespace qhorizon {

inline constexpr const char* kVersion = "1.0.0";

class usage_error : public std::invalid_argument {
 public:
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

enum class SweepParam { alpha, omega, th };

inline const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::alpha: return "alpha";
    case SweepParam::omega: return "omega";
    case SweepParam::th: return "th";
  }
  return "?";
}

struct GridAxis {
  SweepParam param = SweepParam::alpha;
  double start = 0.0;
  double stop = 1.0;
  int points = 201;
  bool log_scale = false;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
      v.push_back(start);
      return v;
    }
    if (log_scale) {
      const double l0 = std::log(start);
      const double l1 = std::log(stop);
      for (int i = 0; i < points; ++i)
        v.push_back(std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (points - 1)));
    } else {
      for (int i = 0; i < points; ++i)
        v.push_back(start + (stop - start) * static_cast<double>(i) / (points - 1));
    }
    return v;
  }

  std::string describe() const {
    std::ostringstream os;
    os << sweep_param_name(param) << ':' << start << ':' << stop << ':' << points
       << (log_scale ? ":log" : ":linear");
    return os.str();
  }
};

enum class OutputFormat { csv, json };

struct SweepSpec {
  Scenario scenario = Scenario::ABC();
  std::vector<GridAxis> axes;  // one or two swept axes
  double alpha = 0.70710678118654752440;
  double omega = 1.0;
  double th = 1.0;
  MeasureSelection measures{true, true, true, true, true, false};
  RoofConfig roof;
  int threads = 1;
  OutputFormat format = OutputFormat::csv;
  std::string out = "-";
  double gc_scale = 1.0;  // display scale applied to the gc column on emit
  std::string preset_name;
};

namespace detail {

inline double parse_double_arg(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw usage_error("invalid number '" + text + "' for " + what);
  return value;
}

inline long long parse_int_arg(const std::string& text, const std::string& what) {
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw usage_error("invalid integer '" + text + "' for " + what);
  return value;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

inline GridAxis parse_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 && parts.size() != 5)
    throw usage_error("sweep axis must be axis:start:stop:points[:log|:linear], got '" + text + "'");
  GridAxis axis;
  if (parts[0] == "alpha")
    axis.param = SweepParam::alpha;
  else if (parts[0] == "omega")
    axis.param = SweepParam::omega;
  else if (parts[0] == "th")
    axis.param = SweepParam::th;
  else
    throw usage_error("unknown sweep axis '" + parts[0] + "' (use alpha, omega or th)");
  axis.start = parse_double_arg(parts[1], "sweep start");
  axis.stop = parse_double_arg(parts[2], "sweep stop");
  const long long pts = parse_int_arg(parts[3], "sweep points");
  if (pts < 1 || pts > 2000000) throw usage_error("sweep points must be between 1 and 2000000");
  axis.points = static_cast<int>(pts);
  if (parts.size() == 5) {
    if (parts[4] == "log")
      axis.log_scale = true;
    else if (parts[4] == "linear")
      axis.log_scale = false;
    else
      throw usage_error("sweep scale must be 'log' or 'linear', got '" + parts[4] + "'");
  }
  if (!(axis.start <= axis.stop)) throw usage_error("sweep start must not exceed stop");
  if (axis.log_scale && !(axis.start > 0.0))
    throw usage_error("log-scale sweeps require positive bounds");
  if (axis.param == SweepParam::alpha && (axis.start < 0.0 || axis.stop > 1.0))
    throw usage_error("alpha sweeps must stay within [0, 1]");
  if (axis.param != SweepParam::alpha && !(axis.start > 0.0))
    throw usage_error("omega and th sweeps require positive bounds");
  return axis;
}

inline MeasureSelection parse_measures(const std::string& text) {
  MeasureSelection sel;
  for (const std::string& tok : split(text, ',')) {
    if (tok == "qc")
      sel.qc = true;
    else if (tok == "foc")
      sel.foc = true;
    else if (tok == "gc")
      sel.gc = true;
    else if (tok == "cf")
      sel.cf = true;
    else if (tok == "tradeoff")
      sel.tradeoff = true;
    else if (tok == "mi")
      sel.mi = true;
    else if (tok == "all")
      sel = MeasureSelection::all();
    else
      throw usage_error("unknown measure '" + tok + "' (use qc,foc,gc,cf,tradeoff,mi)");
  }
  if (!(sel.qc || sel.foc || sel.gc || sel.cf || sel.tradeoff || sel.mi))
    throw usage_error("at least one measure must be selected");
  return sel;
}

}  // namespace detail

// Grid defaults shared by the figure presets.
inline GridAxis default_alpha_axis() { return {SweepParam::alpha, 0.0, 1.0, 201, false}; }
inline GridAxis default_th_axis() { return {SweepParam::th, 0.01, 100.0, 200, true}; }
inline GridAxis default_omega_axis() { return {SweepParam::omega, 0.1, 10.0, 200, true}; }

// Expands a figure preset (fig2a ... fig13d) into a full sweep specification.
inline SweepSpec preset(const std::string& name) {
  static constexpr double kInvSqrt2 = 0.70710678118654752440;

  auto scenario_for = [](int figure) {
    switch (figure) {
      case 2: case 3: case 4: return Scenario::ABC();
      case 5: case 6: case 7: return Scenario::Abc();
      case 8: case 9: case 10: return Scenario::AbB();
      case 11: case 12: case 13: return Scenario::ABc();
      default: throw usage_error("unknown preset 'fig" + std::to_string(figure) + "'");
    }
  };

  if (name.size() < 5 || name.compare(0, 3, "fig") != 0)
    throw usage_error("unknown preset '" + name + "'");
  const char panel = name.back();
  int figure = 0;
  try {
    figure = std::stoi(name.substr(3, name.size() - 4));
  } catch (const std::exception&) {
    throw usage_error("unknown preset '" + name + "'");
  }
  if (figure < 2 || figure > 13) throw usage_error("unknown preset '" + name + "'");

  SweepSpec spec;
  spec.preset_name = name;
  spec.scenario = scenario_for(figure);

  const bool alpha_family = (figure == 2 || figure == 5 || figure == 8 || figure == 11);
  const bool curve_family = (figure == 3 || figure == 6 || figure == 9 || figure == 12);
  const bool mi_family = (figure == 4 || figure == 7 || figure == 10 || figure == 13);

  if (alpha_family) {
    if (panel < 'a' || panel > 'd') throw usage_error("unknown preset '" + name + "'");
    spec.axes = {default_alpha_axis()};
    spec.omega = 1.0;
    spec.th = (panel == 'a') ? 0.01 : (panel == 'b') ? 1.0 : (panel == 'c') ? 10.0 : 100.0;
    spec.measures = {true, true, true, true, true, false};
  } else if (curve_family) {
    if (panel != 'a' && panel != 'b') throw usage_error("unknown preset '" + name + "'");
    spec.alpha = kInvSqrt2;
    if (panel == 'a') {
      spec.axes = {default_th_axis()};
      spec.omega = 1.0;
    } else {
      spec.axes = {default_omega_axis()};
      spec.th = 0.1;
    }
    spec.measures = {true, true, true, true, true, false};
  } else if (mi_family) {
    if (panel < 'a' || panel > 'd') throw usage_error("unknown preset '" + name + "'");
    spec.measures = {false, false, false, false, false, true};
    switch (panel) {
      case 'a':
        spec.axes = {default_alpha_axis()};
        spec.omega = 1.0;
        spec.th = 0.01;
        break;
      case 'b':
        spec.axes = {default_alpha_axis()};
        spec.omega = 1.0;
        spec.th = 10.0;
        break;
      case 'c':
        spec.axes = {default_th_axis()};
        spec.omega = 1.0;
        spec.alpha = kInvSqrt2;
        break;
      case 'd':
        spec.axes = {default_omega_axis()};
        spec.th = 0.1;
        spec.alpha = kInvSqrt2;
        break;
    }
  } else {
    throw usage_error("unknown preset '" + name + "'");
  }
  return spec;
}

// Parses CLI arguments (without argv[0]). A --preset expands first; every
// other flag then overrides it left-to-right.
inline SweepSpec parse_args(const std::vector<std::string>& args) {
  SweepSpec spec;
  spec.axes.clear();
  bool have_preset = false;

  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--preset") {
      if (i + 1 >= args.size()) throw usage_error("--preset requires a value");
      if (have_preset) throw usage_error("only one --preset may be given");
      spec = preset(args[i + 1]);
      have_preset = true;
      ++i;
    }
  }

  auto value_of = [&](std::size_t& i, const std::string& flag) -> const std::string& {
    if (i + 1 >= args.size()) throw usage_error(flag + " requires a value");
    return args[++i];
  };

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--preset") {
      ++i;  // already expanded
    } else if (arg == "--scenario") {
      const std::string& v = value_of(i, arg);
      Scenario sc = [&] {
        try {
          return parse_scenario(v);
        } catch (const std::exception& e) {
          throw usage_error(std::string("invalid scenario: ") + e.what());
        }
      }();
      if (sc.sites.size() != 3) throw usage_error("scenario must select exactly three subsystems");
      spec.scenario = sc;
    } else if (arg == "--sweep") {
      const GridAxis axis = detail::parse_axis(value_of(i, arg));
      bool replaced = false;
      for (GridAxis& existing : spec.axes)
        if (existing.param == axis.param) {
          existing = axis;
          replaced = true;
        }
      if (!replaced) {
        if (spec.axes.size() >= 2) throw usage_error("at most two axes may be swept per run");
        spec.axes.push_back(axis);
      }
    } else if (arg == "--alpha") {
      spec.alpha = detail::parse_double_arg(value_of(i, arg), "--alpha");
      if (spec.alpha < 0.0 || spec.alpha > 1.0) throw usage_error("--alpha must lie in [0, 1]");
    } else if (arg == "--omega") {
      spec.omega = detail::parse_double_arg(value_of(i, arg), "--omega");
      if (!(spec.omega > 0.0)) throw usage_error("--omega must be positive");
    } else if (arg == "--th") {
      spec.th = detail::parse_double_arg(value_of(i, arg), "--th");
      if (!(spec.th > 0.0)) throw usage_error("--th must be positive");
    } else if (arg == "--measures") {
      spec.measures = detail::parse_measures(value_of(i, arg));
    } else if (arg == "--restarts") {
      const long long v = detail::parse_int_arg(value_of(i, arg), "--restarts");
      if (v < 1 || v > 100000) throw usage_error("--restarts must be between 1 and 100000");
      spec.roof.restarts = static_cast<int>(v);
    } else if (arg == "--iters") {
      const long long v = detail::parse_int_arg(value_of(i, arg), "--iters");
      if (v < 1 || v > 100000000) throw usage_error("--iters must be between 1 and 1e8");
      spec.roof.max_iters = static_cast<int>(v);
    } else if (arg == "--seed") {
      const long long v = detail::parse_int_arg(value_of(i, arg), "--seed");
      spec.roof.rng_seed = static_cast<std::uint64_t>(v);
    } else if (arg == "--threads") {
      const long long v = detail::parse_int_arg(value_of(i, arg), "--threads");
      if (v < 1 || v > 1024) throw usage_error("--threads must be between 1 and 1024");
      spec.threads = static_cast<int>(v);
    } else if (arg == "--format") {
      const std::string& v = value_of(i, arg);
      if (v == "csv")
        spec.format = OutputFormat::csv;
      else if (v == "json")
        spec.format = OutputFormat::json;
      else
        throw usage_error("--format must be csv or json");
    } else if (arg == "--out") {
      spec.out = value_of(i, arg);
    } else if (arg == "--fast") {
      spec.roof.restarts = 8;
      spec.roof.max_iters = 500;
    } else if (arg == "--gc-scale") {
      spec.gc_scale = detail::parse_double_arg(value_of(i, arg), "--gc-scale");
      if (!(spec.gc_scale > 0.0)) throw usage_error("--gc-scale must be positive");
    } else {
      throw usage_error("unknown flag '" + arg + "'");
    }
  }

  if (spec.axes.empty())
    throw usage_error("a sweep needs at least one --sweep axis or a --preset");
  return spec;
}

struct SweepResult {
  SweepSpec spec;
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> points;  // swept parameter values per row
  std::vector<MeasureReport> reports;       // one per row, grid order
};

// Runs the grid. Rows are ordered by grid index (first axis slow) regardless
// of the worker count; every point derives its roof stream from
// (seed, grid index), so threads=1 and threads=N produce identical tables.
inline SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw usage_error("a sweep requires one or two axes");
  if (spec.axes.size() == 2 && spec.axes[0].param == spec.axes[1].param)
    throw usage_error("swept axes must differ");
  if (spec.scenario.sites.size() != 3)
    throw usage_error("scenario must select exactly three subsystems");

  std::vector<std::vector<double>> grids;
  std::size_t total = 1;
  for (const GridAxis& axis : spec.axes) {
    grids.push_back(axis.values());
    total *= grids.back().size();
  }

  SweepResult result;
  result.spec = spec;
  for (const GridAxis& axis : spec.axes) result.axis_names.push_back(sweep_param_name(axis.param));
  result.points.resize(total);
  result.reports.resize(total);

  auto compute = [&](std::size_t idx) {
    double alpha = spec.alpha;
    double omega = spec.omega;
    double th = spec.th;
    std::vector<double> values(spec.axes.size());
    std::size_t rem = idx;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const std::size_t n = grids[a].size();
      const double v = grids[a][rem % n];
      rem /= n;
      values[a] = v;
      switch (spec.axes[a].param) {
        case SweepParam::alpha: alpha = v; break;
        case SweepParam::omega: omega = v; break;
        case SweepParam::th: th = v; break;
      }
    }
    const HorizonParams hp = derive_coefficients(alpha, omega, th);
    RoofConfig cfg = spec.roof;
    cfg.rng_seed = detail::mix64(spec.roof.rng_seed, static_cast<std::uint64_t>(idx));
    result.reports[idx] = evaluate_point(hp, spec.scenario, cfg, spec.measures);
    result.points[idx] = std::move(values);
  };

  const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(total)));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) compute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto drain = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= total) return;
        {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (error) return;
        }
        try {
          compute(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  return result;
}

namespace detail {

inline std::string format_value(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string spec_echo(const SweepSpec& spec) {
  std::ostringstream os;
  os << "scenario=" << spec.scenario.name;
  os << " axes=";
  for (std::size_t i = 0; i < spec.axes.size(); ++i)
    os << (i ? "," : "") << spec.axes[i].describe();
  os << " alpha=" << format_value(spec.alpha) << " omega=" << format_value(spec.omega)
     << " th=" << format_value(spec.th);
  os << " measures=";
  bool first = true;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    os << (first ? "" : ",") << name;
    first = false;
  };
  add(spec.measures.qc, "qc");
  add(spec.measures.foc, "foc");
  add(spec.measures.gc, "gc");
  add(spec.measures.cf, "cf");
  add(spec.measures.tradeoff, "tradeoff");
  add(spec.measures.mi, "mi");
  os << " restarts=" << spec.roof.restarts << " iters=" << spec.roof.max_iters
     << " ensemble=" << (spec.roof.ensemble_size == 0 ? std::string("auto")
                                                      : std::to_string(spec.roof.ensemble_size))
     << " seed=" << spec.roof.rng_seed << " threads=" << spec.threads
     << " format=" << (spec.format == OutputFormat::csv ? "csv" : "json")
     << " gc_scale=" << format_value(spec.gc_scale);
  if (!spec.preset_name.empty()) os << " preset=" << spec.preset_name;
  return os.str();
}

struct ColumnLayout {
  std::vector<std::string> names;
  // Extracts the column values of one row in emission order.
  std::vector<double> row(const SweepResult& res, std::size_t idx) const {
    const MeasureReport& rep = res.reports[idx];
    const MeasureSelection& sel = res.spec.measures;
    std::vector<double> out = res.points[idx];
    if (sel.qc) out.push_back(rep.qc);
    if (sel.foc) out.push_back(rep.foc);
    if (sel.gc) out.push_back(rep.gc * res.spec.gc_scale);
    if (sel.cf) out.push_back(rep.cf);
    if (sel.tradeoff) out.push_back(rep.tradeoff);
    if (sel.mi)
      for (const auto& [label, value] : rep.mutual_info) out.push_back(value);
    if (sel.cf || sel.tradeoff) {
      out.push_back(rep.cf_diag.restarts_used);
      out.push_back(rep.cf_diag.median);
      out.push_back(rep.cf_diag.converged ? 1.0 : 0.0);
    }
    if (sel.gc) {
      out.push_back(rep.gc_diag.restarts_used);
      out.push_back(rep.gc_diag.median);
      out.push_back(rep.gc_diag.converged ? 1.0 : 0.0);
    }
    return out;
  }
};

inline ColumnLayout column_layout(const SweepSpec& spec) {
  ColumnLayout layout;
  for (const GridAxis& axis : spec.axes) layout.names.push_back(sweep_param_name(axis.param));
  const MeasureSelection& sel = spec.measures;
  if (sel.qc) layout.names.push_back("qc");
  if (sel.foc) layout.names.push_back("foc");
  if (sel.gc) layout.names.push_back("gc");
  if (sel.cf) layout.names.push_back("cf");
  if (sel.tradeoff) layout.names.push_back("tradeoff");
  if (sel.mi)
    for (const SubsetSelector& pair : mutual_information_pairs(spec.scenario))
      layout.names.push_back("I_" + subset_label(pair));
  if (sel.cf || sel.tradeoff) {
    layout.names.push_back("cf_restarts");
    layout.names.push_back("cf_median");
    layout.names.push_back("cf_converged");
  }
  if (sel.gc) {
    layout.names.push_back("gc_restarts");
    layout.names.push_back("gc_median");
    layout.names.push_back("gc_converged");
  }
  return layout;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += std::string("\\") + c;
    else if (static_cast<unsigned char>(c) < 0x20)
      out += ' ';
    else
      out += c;
  }
  return out;
}

}  // namespace detail

// CSV: '#'-prefixed provenance lines, a header row, then one data row per
// grid point with 12 significant digits. The data section (everything after
// the '#' lines) is byte-identical across runs with the same spec and seed.
inline void emit_csv(const SweepResult& result, double wall_seconds, std::ostream& os) {
  const auto layout = detail::column_layout(result.spec);
  os << "# qhorizon " << kVersion << "\n";
  os << "# spec: " << detail::spec_echo(result.spec) << "\n";
  os << "# seed: " << result.spec.roof.rng_seed << "\n";
  os << "# wall_time_s: " << detail::format_value(wall_seconds) << "\n";
  for (std::size_t c = 0; c < layout.names.size(); ++c)
    os << (c ? "," : "") << layout.names[c];
  os << "\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto row = layout.row(result, i);
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << detail::format_value(row[c]);
    os << "\n";
  }
}

// JSON mirror of the CSV schema: {"meta": {...}, "columns": [...], "rows": [...]}.
inline void emit_json(const SweepResult& result, double wall_seconds, std::ostream& os) {
  const auto layout = detail::column_layout(result.spec);
  os << "{\n  \"meta\": {\n";
  os << "    \"version\": \"" << kVersion << "\",\n";
  os << "    \"spec\": \"" << detail::json_escape(detail::spec_echo(result.spec)) << "\",\n";
  os << "    \"seed\": " << result.spec.roof.rng_seed << ",\n";
  os << "    \"wall_time_s\": " << detail::format_value(wall_seconds) << "\n  },\n";
  os << "  \"columns\": [";
  for (std::size_t c = 0; c < layout.names.size(); ++c)
    os << (c ? ", " : "") << '"' << detail::json_escape(layout.names[c]) << '"';
  os << "],\n  \"rows\": [\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto row = layout.row(result, i);
    os << "    [";
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? ", " : "") << detail::format_value(row[c]);
    os << (i + 1 < result.reports.size() ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
}

// Writes to result.spec.out ("-" = stdout). A failed write removes the
// partial file before raising.
inline void emit(const SweepResult& result, double wall_seconds) {
  auto write = [&](std::ostream& os) {
    if (result.spec.format == OutputFormat::csv)
      emit_csv(result, wall_seconds, os);
    else
      emit_json(result, wall_seconds, os);
  };
  if (result.spec.out == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw io_error("failed to write to stdout");
    return;
  }
  std::ofstream file(result.spec.out);
  if (!file) throw io_error("cannot open output file '" + result.spec.out + "'");
  write(file);
  file.flush();
  if (!file) {
    file.close();
    std::remove(result.spec.out.c_str());
    throw io_error("failed while writing '" + result.spec.out + "'; partial file removed");
  }
}

}  // namespace qhorizon
