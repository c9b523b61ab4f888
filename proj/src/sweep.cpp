#include "cqfi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cqfi/closed_forms.hpp"
#include "cqfi/errors.hpp"
#include "cqfi/qfi.hpp"

namespace cqfi {

namespace {

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

void check_unit_grid(const Grid& g, std::string_view name) {
  if (g.count < 2) throw std::invalid_argument(std::string(name) + " grid needs count >= 2");
  for (double v : {g.start, g.stop}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " grid must lie within [0, 1]");
  }
}

void check_range(double qfi, const ProbeSpec& probe, const ChannelSpec& channel, Param param, Method method) {
  const double cap = 4.0 * probe.n_qubits;
  if (qfi >= -kNegativeQfiSlack && qfi <= cap) return;
  std::ostringstream msg;
  msg << "qfi " << real17(qfi) << " outside [-1e-10, " << cap << "] for " << to_string(channel.kind)
      << " p=" << channel.p << " mu=" << channel.mu << " param=" << to_string(param)
      << " method=" << to_string(method);
  throw numerical_error(msg.str());
}

SweepRecord make_record(const ProbeSpec& probe, const ChannelSpec& channel, Param param, Method method, double qfi) {
  return {channel.kind,
          probe.family,
          probe.n_qubits,
          is_bell_type(probe.family) ? 1.0 : probe.r,
          probe.theta,
          probe.phi,
          channel.p,
          channel.mu,
          param,
          method,
          qfi};
}

int worker_count(int jobs, std::size_t tasks) {
  int n = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(tasks, 1)));
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Sld: return "sld";
    case Method::ClosedForm: return "closed";
    case Method::Both: return "both";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "sld") return Method::Sld;
  if (text == "closed") return Method::ClosedForm;
  if (text == "both") return Method::Both;
  throw std::invalid_argument("unknown method '" + std::string(text) + "' (expected sld|closed|both)");
}

std::vector<double> Grid::values() const {
  if (count < 2) throw std::invalid_argument("grid needs count >= 2");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
  v.back() = stop;
  return v;
}

Grid parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid '" + std::string(text) + "' is not of the form start:stop:count");
  }
  auto number = [&](std::string_view part, auto& out) {
    const auto res = std::from_chars(part.data(), part.data() + part.size(), out);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size()) {
      throw std::invalid_argument("grid '" + std::string(text) + "': cannot parse '" + std::string(part) + "'");
    }
  };
  Grid g;
  number(text.substr(0, c1), g.start);
  number(text.substr(c1 + 1, c2 - c1 - 1), g.stop);
  number(text.substr(c2 + 1), g.count);
  if (g.count < 2) throw std::invalid_argument("grid '" + std::string(text) + "': count must be >= 2");
  return g;
}

void validate(const SweepConfig& config) {
  validate(config.probe);
  check_unit_grid(config.p_grid, "p");
  check_unit_grid(config.mu_grid, "mu");
  if (config.params.empty()) throw std::invalid_argument("sweep needs at least one parameter");
  if (config.jobs < 0) throw std::invalid_argument("jobs must be >= 0");
  require_method_supported(config.probe, config.method);
}

Method default_method(const ProbeSpec& probe) { return closed_form_available(probe) ? Method::Both : Method::Sld; }

void require_method_supported(const ProbeSpec& probe, Method method) {
  if (method == Method::Sld || closed_form_available(probe)) return;
  throw std::invalid_argument("closed forms exist only for the phi+ probe with n = 2 (got " +
                              std::string(to_string(probe.family)) + ", n = " + std::to_string(probe.n_qubits) +
                              "); use --method sld");
}

PointEvaluation evaluate_point(const ProbeSpec& probe, const ChannelSpec& channel, Param param, Method method) {
  require_method_supported(probe, method);
  PointEvaluation out;
  std::optional<double> sld;
  if (method != Method::ClosedForm) {
    sld = qfi_numeric(probe, channel, param);
    check_range(*sld, probe, channel, param, Method::Sld);
    out.records.push_back(make_record(probe, channel, param, Method::Sld, *sld));
  }
  if (method != Method::Sld) {
    double closed = 0.0;
    try {
      closed = closed_form_qfi(channel, probe.theta, probe.phi, param);
    } catch (const degenerate_spectrum&) {
      if (!sld) sld = qfi_numeric(probe, channel, param);
      closed = *sld;
      out.closed_fell_back = true;
    }
    check_range(closed, probe, channel, param, Method::ClosedForm);
    if (sld) {
      out.discrepancy = std::abs(closed - *sld);
      if (*out.discrepancy > kMethodDiscrepancyLimit) {
        std::ostringstream msg;
        msg << "closed form and SLD disagree by " << real17(*out.discrepancy) << " at " << to_string(channel.kind)
            << " p=" << real17(channel.p) << " mu=" << real17(channel.mu) << " theta=" << real17(probe.theta)
            << " phi=" << real17(probe.phi) << " param=" << to_string(param) << " (closed " << real17(closed)
            << ", sld " << real17(*sld) << ")";
        throw numerical_error(msg.str());
      }
    }
    out.records.push_back(make_record(probe, channel, param, Method::ClosedForm, closed));
  }
  return out;
}

std::vector<SweepRecord> evaluate_tasks(std::span<const PointTask> tasks, int jobs) {
  std::vector<std::vector<SweepRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        for (Param param : tasks[t].params) {
          auto eval = evaluate_point(tasks[t].probe, tasks[t].channel, param, tasks[t].method);
          slots[t].insert(slots[t].end(), eval.records.begin(), eval.records.end());
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int workers = worker_count(jobs, tasks.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRecord> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

std::vector<SweepRecord> sweep_records(const SweepConfig& config) {
  validate(config);
  std::vector<PointTask> tasks;
  for (double p : config.p_grid.values())
    for (double mu : config.mu_grid.values())
      tasks.push_back({config.probe, {config.channel, p, mu}, config.params, config.method});
  return evaluate_tasks(tasks, config.jobs);
}

std::string format_csv_row(const SweepRecord& r) {
  std::string line;
  line.reserve(160);
  line += to_string(r.channel);
  line += ',';
  line += to_string(r.family);
  line += ',';
  line += std::to_string(r.n);
  for (double v : {r.r, r.theta, r.phi, r.p, r.mu}) {
    line += ',';
    line += real17(v);
  }
  line += ',';
  line += to_string(r.param);
  line += ',';
  line += to_string(r.method);
  line += ',';
  line += real17(r.qfi);
  return line;
}

void write_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << format_csv_row(r) << '\n';
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  f.close();
  if (!f) throw io_error("failed writing '" + path + "'");
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.output_path.empty()) throw std::invalid_argument("sweep needs an output path");
  validate(config);
  std::ofstream f(config.output_path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot open '" + config.output_path + "' for writing");
  std::vector<SweepRecord> rows = sweep_records(config);
  write_csv(f, rows);
  f.close();
  if (!f) throw io_error("failed writing '" + config.output_path + "'");
  return rows;
}

}  // namespace cqfi
