#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "hbi/oracle.hpp"
#include "hbi/panel.hpp"

namespace hbi::cli {

namespace {

using Integrals = PanelIntegrals<double>;
using oracle::Quantity;

// Runs fn(0..n-1) on up to `threads` workers. Exceptions are kept per index
// and the lowest-index one is rethrown, so failures do not depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cnum(const std::complex<double>& c) { return "[" + num(c.real()) + ", " + num(c.imag()) + "]"; }

template <typename Vec>
std::string cvec(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += cnum(v(i));
  }
  return s + "]";
}

std::string str(const std::string& s) { return "\"" + s + "\""; }

const char* side_name(Side s) {
  switch (s) {
    case Side::Above: return "above";
    case Side::Below: return "below";
    case Side::InPlane: return "in_plane";
  }
  return "?";
}

oracle::CVec<double> analytic_value(const Integrals& in, Quantity q) {
  oracle::CVec<double> v(oracle::components(q));
  switch (q) {
    case Quantity::L: v(0) = in.L; break;
    case Quantity::M: v(0) = in.M; break;
    case Quantity::Lgrad: v = in.L_grad; break;
    case Quantity::Mgrad: v = in.M_grad; break;
  }
  return v;
}

std::string format_value(const oracle::CVec<double>& v) {
  return v.size() == 1 ? cnum(v(0)) : cvec(v);
}

// Evaluates every (point, panel) pair in point-major order.
std::vector<Integrals> evaluate(const Job& job, const TruncationPolicy& policy, int threads) {
  const std::size_t np = job.panels.size();
  std::vector<Integrals> out(job.points.size() * np);
  try {
    parallel_for(out.size(), threads, [&](std::size_t idx) {
      const std::size_t i = idx / np, j = idx % np;
      try {
        out[idx] = panel_integrals(job.panels[j], job.points[i], job.wavenumber, policy);
      } catch (const StrongSingular& e) {
        std::ostringstream msg;
        msg << "point " << i << ", panel " << j << ", edge " << e.edge() << ": " << e.what();
        throw CommandError(kStrongSingular, msg.str());
      } catch (const TruncationOverflow& e) {
        std::ostringstream msg;
        msg << "point " << i << ", panel " << j << ": " << e.what();
        throw CommandError(kTruncationOverflow, msg.str());
      }
    });
  } catch (const CommandError&) {
    throw;
  }
  return out;
}

struct OracleEntry {
  bool available = false;
  oracle::CVec<double> value;
  double error_estimate = 0;
  std::string note;
};

OracleEntry oracle_value(const Job& job, std::size_t i, std::size_t j, Quantity q, Side side) {
  OracleEntry e;
  oracle::OracleConfig cfg = job.oracle;
  if (side == Side::InPlane) cfg.singular_scheme = oracle::SingularScheme::PolarAboutProjection;
  try {
    auto r = oracle::quad_panel(job.panels[j], job.points[i], job.wavenumber, q, cfg);
    e.available = true;
    e.value = r.value;
    e.error_estimate = r.error_estimate;
  } catch (const std::invalid_argument& ex) {
    e.note = ex.what();
  } catch (const NoConvergence& ex) {
    e.note = ex.what();
    e.error_estimate = ex.error_estimate();
  }
  return e;
}

}  // namespace

CommandResult run_compute(const Job& job, int threads) {
  const auto values = evaluate(job, job.truncation, threads);
  const std::size_t np = job.panels.size();
  const std::size_t nq = job.quantities.size();

  std::vector<OracleEntry> oracles;
  if (job.compare_oracle) {
    oracles.resize(values.size() * nq);
    parallel_for(oracles.size(), threads, [&](std::size_t idx) {
      const std::size_t pair = idx / nq;
      oracles[idx] = oracle_value(job, pair / np, pair % np, job.quantities[idx % nq], values[pair].side);
    });
  }

  std::ostringstream os;
  os << "{\n  \"wavenumber\": " << num(job.wavenumber) << ",\n  \"quantities\": [";
  for (std::size_t q = 0; q < nq; ++q) os << (q ? ", " : "") << str(quantity_name(job.quantities[q]));
  os << "],\n  \"results\": [";
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    const Integrals& v = values[idx];
    os << (idx ? ",\n" : "\n") << "    {\"point\": " << idx / np << ", \"panel\": " << idx % np;
    for (Quantity q : job.quantities) os << ", " << str(quantity_name(q)) << ": " << format_value(analytic_value(v, q));
    if (job.compare_oracle) {
      os << ", \"oracle\": {";
      for (std::size_t q = 0; q < nq; ++q) {
        const OracleEntry& o = oracles[idx * nq + q];
        os << (q ? ", " : "") << str(quantity_name(job.quantities[q])) << ": "
           << (o.available ? format_value(o.value) : std::string("null"));
      }
      os << "}";
    }
    os << ", \"meta\": {\"truncation_order\": " << v.truncation_order << ", \"side\": " << str(side_name(v.side))
       << ", \"h_over_diameter\": " << num(v.h_over_diameter) << ", \"branches\": [";
    for (std::size_t e = 0; e < v.edge_branches.size(); ++e) {
      os << (e ? ", " : "") << str(to_string(v.edge_branches[e]));
    }
    os << "]}}";
  }
  os << "\n  ]\n}\n";
  return {os.str(), kOk};
}

CommandResult run_compare(const Job& job, int threads) {
  const auto values = evaluate(job, job.truncation, threads);
  const std::size_t np = job.panels.size();
  const std::size_t nq = job.quantities.size();
  std::vector<OracleEntry> oracles(values.size() * nq);
  parallel_for(oracles.size(), threads, [&](std::size_t idx) {
    const std::size_t pair = idx / nq;
    oracles[idx] = oracle_value(job, pair / np, pair % np, job.quantities[idx % nq], values[pair].side);
  });

  std::vector<double> rel_errors;
  double max_abs = 0;
  bool all_converged = true;
  std::ostringstream entries;
  for (std::size_t idx = 0; idx < oracles.size(); ++idx) {
    const std::size_t pair = idx / nq;
    const Quantity q = job.quantities[idx % nq];
    const OracleEntry& o = oracles[idx];
    const auto a = analytic_value(values[pair], q);
    entries << (idx ? ",\n" : "\n") << "    {\"point\": " << pair / np << ", \"panel\": " << pair % np
            << ", \"quantity\": " << str(quantity_name(q)) << ", \"analytic\": " << format_value(a);
    if (!o.available) {
      if (o.note.find("budget") != std::string::npos) all_converged = false;
      entries << ", \"oracle\": null, \"note\": " << str(o.note) << "}";
      continue;
    }
    const double abs_err = (a - o.value).norm();
    const double ref = o.value.norm();
    const double rel_err = ref > 0 ? abs_err / ref : abs_err;
    rel_errors.push_back(rel_err);
    max_abs = std::max(max_abs, abs_err);
    entries << ", \"oracle\": " << format_value(o.value) << ", \"abs_error\": " << num(abs_err)
            << ", \"rel_error\": " << num(rel_err) << ", \"oracle_error\": " << num(o.error_estimate) << "}";
  }

  double max_rel = 0, median_rel = 0;
  if (!rel_errors.empty()) {
    std::vector<double> sorted = rel_errors;
    std::sort(sorted.begin(), sorted.end());
    max_rel = sorted.back();
    const std::size_t m = sorted.size();
    median_rel = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  const bool pass = all_converged && max_rel <= job.tolerance;

  std::ostringstream os;
  os << "{\n  \"wavenumber\": " << num(job.wavenumber) << ",\n  \"tolerance\": " << num(job.tolerance)
     << ",\n  \"entries\": [" << entries.str() << "\n  ],\n  \"summary\": {\"compared\": " << rel_errors.size()
     << ", \"max_rel_error\": " << num(max_rel) << ", \"median_rel_error\": " << num(median_rel)
     << ", \"max_abs_error\": " << num(max_abs) << ", \"pass\": " << (pass ? "true" : "false") << "}\n}\n";
  return {os.str(), pass ? kOk : kCompareFailed};
}

CommandResult run_convergence(const Job& job, int threads) {
  std::ostringstream os;
  os << "p,max_err,bound\n";
  if (job.wavenumber == 0) {
    os << "1,0,0\n";
    return {os.str(), kOk};
  }
  double d = 0;
  for (const auto& p : job.panels) d = std::max(d, *std::max_element(p.edge_lengths.begin(), p.edge_lengths.end()));
  const int p_ref = job.truncation.p_max;
  const auto reference = evaluate(job, TruncationPolicy::fixed(p_ref), threads);
  for (int p = 1; p <= p_ref; ++p) {
    const auto values = evaluate(job, TruncationPolicy::fixed(p), threads);
    double max_err = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (Quantity q : job.quantities) {
        max_err = std::max(max_err, (analytic_value(values[i], q) - analytic_value(reference[i], q)).norm());
      }
    }
    os << p << "," << num(max_err) << "," << num(truncation_bound(job.wavenumber, d, p)) << "\n";
  }
  return {os.str(), kOk};
}

int dispatch(const std::string& command, const std::string& job_path, const std::string& out_path,
             int threads, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    const Job job = load_job(job_path, seed);
    CommandResult res;
    if (command == "compute") {
      res = run_compute(job, threads);
    } else if (command == "compare") {
      res = run_compare(job, threads);
    } else if (command == "convergence") {
      res = run_convergence(job, threads);
    } else {
      err << "unknown command '" << command << "'\n";
      return kFailure;
    }
    if (out_path.empty()) {
      out << res.output;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) {
        err << "cannot write '" << out_path << "'\n";
        return kFailure;
      }
      f << res.output;
    }
    if (res.code == kCompareFailed) err << "comparison exceeded tolerance\n";
    return res.code;
  } catch (const JobError& e) {
    err << "job error: " << e.what() << "\n";
    return kSchemaError;
  } catch (const CommandError& e) {
    err << (e.code() == kStrongSingular ? "strong singularity: " : "truncation overflow: ") << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace hbi::cli
