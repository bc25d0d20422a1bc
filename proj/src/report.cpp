#include "iwal/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace iwal {

using nlohmann::json;

namespace {

json to_json(const ArmSummary& a) {
  return {{"test_loss", a.test_loss},
          {"test_error", a.test_error},
          {"queries", a.queries},
          {"query_fraction", a.query_fraction}};
}

ArmSummary arm_from_json(const json& j) {
  return {j.at("test_loss").get<double>(), j.at("test_error").get<double>(),
          j.at("queries").get<std::size_t>(), j.at("query_fraction").get<double>()};
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

json to_json(const RunSummary& s) {
  json curve = json::array();
  for (const auto& c : s.curve) {
    curve.push_back({{"t", c.t},
                     {"cum_queries", c.cum_queries},
                     {"active_test_loss", c.active_test_loss},
                     {"passive_test_loss", c.passive_test_loss}});
  }
  return {{"config", s.config},
          {"seed", s.seed},
          {"strategy", s.strategy},
          {"horizon", s.horizon},
          {"active", to_json(s.active)},
          {"passive", to_json(s.passive)},
          {"oracle_calls", s.oracle_calls},
          {"solver",
           {{"solves", s.solver.solves},
            {"short_circuits", s.solver.short_circuits},
            {"newton_iterations", s.solver.newton_iterations},
            {"max_final_gap", s.solver.max_final_gap}}},
          {"curve", curve}};
}

RunSummary run_summary_from_json(const json& j) {
  RunSummary s;
  s.config = j.at("config");
  s.seed = j.at("seed").get<std::uint64_t>();
  s.strategy = j.at("strategy").get<std::string>();
  s.horizon = j.at("horizon").get<std::size_t>();
  s.active = arm_from_json(j.at("active"));
  s.passive = arm_from_json(j.at("passive"));
  s.oracle_calls = j.at("oracle_calls").get<std::size_t>();
  const auto& solver = j.at("solver");
  s.solver = {solver.at("solves").get<std::size_t>(), solver.at("short_circuits").get<std::size_t>(),
              solver.at("newton_iterations").get<std::size_t>(),
              solver.at("max_final_gap").get<double>()};
  for (const auto& c : j.at("curve")) {
    s.curve.push_back({c.at("t").get<std::size_t>(), c.at("cum_queries").get<std::size_t>(),
                       c.at("active_test_loss").get<double>(),
                       c.at("passive_test_loss").get<double>()});
  }
  return s;
}

json to_json(const Statistic& stat) {
  return {{"mean", stat.mean}, {"stddev", stat.stddev}};
}

json to_json(const CompareReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back(to_json(r.summary));
  return {{"replicates", report.runs.size()},
          {"query_fraction", to_json(report.query_fraction)},
          {"active_error", to_json(report.active_error)},
          {"passive_error", to_json(report.passive_error)},
          {"active_loss", to_json(report.active_loss)},
          {"passive_loss", to_json(report.passive_loss)},
          {"error_gap", to_json(report.error_gap)},
          {"runs", runs}};
}

void write_curve_csv(const RunSummary& summary, std::ostream& out) {
  out << "t,cum_queries,active_test_loss,passive_test_loss\n";
  for (const auto& c : summary.curve) {
    out << c.t << ',' << c.cum_queries << ',' << g17(c.active_test_loss) << ','
        << g17(c.passive_test_loss) << '\n';
  }
}

void emit_curves(const RunReport& report, const std::filesystem::path& dir) {
  make_dir(dir);
  {
    const auto path = dir / "curve.csv";
    auto out = open_output(path);
    write_curve_csv(report.summary, out);
    finish(out, path);
  }
  {
    const auto path = dir / "summary.json";
    auto out = open_output(path);
    out << to_json(report.summary).dump(2) << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "trace.csv";
    auto out = open_output(path);
    write_trace_csv(report.trace, out);
    finish(out, path);
  }
}

void emit_comparison(const CompareReport& report, const std::filesystem::path& dir) {
  make_dir(dir);
  const auto path = dir / "compare.json";
  auto out = open_output(path);
  out << to_json(report).dump(2) << '\n';
  finish(out, path);
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    emit_curves(report.runs[i], dir / ("replicate_" + std::to_string(i)));
  }
}

}  // namespace iwal
