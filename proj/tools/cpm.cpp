// Command-line front end: run the HTTP service or perform the same
// analyses offline on a log file.

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cpm/comparison.hpp"
#include "cpm/csv.hpp"
#include "cpm/demo_log.hpp"
#include "cpm/discovery.hpp"
#include "cpm/error.hpp"
#include "cpm/export.hpp"
#include "cpm/json_forms.hpp"
#include "cpm/service/http_api.hpp"
#include "cpm/service/log_store.hpp"
#include "cpm/service/session_store.hpp"
#include "cpm/xes.hpp"

namespace {

using namespace cpm;

struct InputOptions {
  std::string path;
  std::string format;
  CsvMapping mapping;

  void add_to(CLI::App& cmd) {
    cmd.add_option("log", path, "Event log file (.xes or .csv)")->required()->check(CLI::ExistingFile);
    cmd.add_option("--format", format, "Force the input format")->check(CLI::IsMember({"xes", "csv"}));
    cmd.add_option("--case-column", mapping.case_column, "CSV case id column")->capture_default_str();
    cmd.add_option("--activity-column", mapping.activity_column, "CSV activity column")->capture_default_str();
    cmd.add_option("--timestamp-column", mapping.timestamp_column, "CSV timestamp column")->capture_default_str();
    cmd.add_option("--timestamp-format", mapping.timestamp_format, "CSV timestamp format (strftime-style)")
        ->capture_default_str();
  }

  EventLog load() const {
    const auto fmt = service::detect_format(format, path);
    if (!fmt) throw ConfigurationError("cannot tell the format of " + path + "; pass --format");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot open " + path);
    const std::string stem = std::filesystem::path(path).stem().string();
    if (*fmt == service::LogFormat::Csv) return parse_csv(in, mapping, stem);
    EventLog log = parse_xes(in);
    return log.name().empty() ? EventLog(stem, log.traces()) : log;
  }
};

FilterSpec load_filter(const std::string& arg) {
  if (arg.empty()) return {};
  std::string text = arg;
  if (arg.front() != '{') {
    std::ifstream in(arg);
    if (!in) throw ConfigurationError("cannot open filter file " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("filter is not valid JSON: " + arg);
  return filter_from_json(j);
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + output);
  out << content;
}

httplib::Server* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparative process mining over directly-follows graphs"};
  app.require_subcommand(1);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string root = "logs";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_upload = service::kDefaultMaxUploadBytes;
  bool demo = false;
  bool verbose = false;
  std::string sessions_file;
  serve->add_option("--root", root, "Log repository directory")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Listen port")->capture_default_str();
  serve->add_option("--max-upload-bytes", max_upload, "Largest accepted request body")->capture_default_str();
  serve->add_flag("--demo", demo, "Generate the seed-7 demo log into the repository at startup");
  serve->add_option("--sessions-file", sessions_file, "Session metadata file (default <root>/.sessions.json)");
  serve->add_flag("-v,--verbose", verbose, "Log every request");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Write a synthetic hospital log as XES");
  std::uint64_t seed = 7;
  std::int64_t cases = 500;
  std::string output;
  demo_cmd->add_option("--seed", seed)->capture_default_str();
  demo_cmd->add_option("--cases", cases)->capture_default_str();
  demo_cmd->add_option("-o,--output", output, "Output file (stdout if omitted)");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Print case, variant and event counts and the mean running time");
  InputOptions stats_in;
  std::string stats_filter;
  stats_in.add_to(*stats_cmd);
  stats_cmd->add_option("--filter", stats_filter, "Filter as JSON text or file");

  // variants
  auto* variants_cmd = app.add_subcommand("variants", "Export the variants as CSV");
  InputOptions variants_in;
  std::string variants_filter;
  variants_in.add_to(*variants_cmd);
  variants_cmd->add_option("--filter", variants_filter, "Filter as JSON text or file");
  variants_cmd->add_option("-o,--output", output);

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "Write a (filtered) log as XES");
  InputOptions convert_in;
  std::string convert_filter;
  convert_in.add_to(*convert_cmd);
  convert_cmd->add_option("--filter", convert_filter, "Filter as JSON text or file");
  convert_cmd->add_option("-o,--output", output);

  // discover
  auto* discover_cmd = app.add_subcommand("discover", "Discover the directly-follows graph");
  InputOptions discover_in;
  std::string discover_filter;
  std::string metric_name = "frequency";
  std::string discover_format = "dot";
  discover_in.add_to(*discover_cmd);
  discover_cmd->add_option("--filter", discover_filter, "Filter as JSON text or file");
  discover_cmd->add_option("--metric", metric_name, "frequency|mean|median|min|max")->capture_default_str();
  discover_cmd->add_option("--output-format", discover_format)->check(CLI::IsMember({"dot", "json"}))->capture_default_str();
  discover_cmd->add_option("-o,--output", output);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Compare two slices of one log");
  InputOptions compare_in;
  std::string left_filter;
  std::string right_filter;
  std::string left_label = "Left";
  std::string right_label = "Right";
  std::string compare_format = "json";
  compare_in.add_to(*compare_cmd);
  compare_cmd->add_option("--left", left_filter, "Left filter as JSON text or file")->required();
  compare_cmd->add_option("--right", right_filter, "Right filter as JSON text or file")->required();
  compare_cmd->add_option("--left-label", left_label)->capture_default_str();
  compare_cmd->add_option("--right-label", right_label)->capture_default_str();
  compare_cmd->add_option("--metric", metric_name, "frequency|mean|median|min|max")->capture_default_str();
  compare_cmd->add_option("--output-format", compare_format)
      ->check(CLI::IsMember({"json", "html", "dot-left", "dot-right"}))
      ->capture_default_str();
  compare_cmd->add_option("-o,--output", output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) {
      spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
      service::LogStore logs(root);
      if (demo) {
        const auto added = logs.add_log("demo-seed7.xes", generate_demo_log(7, 500));
        spdlog::info("demo log {} ({} cases)", added.entry.log_id, added.entry.statistics.case_count);
      }
      logs.scan();
      service::SessionStore sessions(logs, sessions_file.empty() ? logs.root() / ".sessions.json"
                                                                 : std::filesystem::path(sessions_file));
      const auto restored = sessions.load();
      httplib::Server server;
      service::HttpApi api(logs, sessions);
      api.install(server, max_upload);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      spdlog::info("{} log(s), {} session(s); listening on http://{}:{}", logs.list().size(), restored, host, port);
      if (!server.listen(host, port)) {
        spdlog::error("cannot listen on {}:{}", host, port);
        return 1;
      }
      return 0;
    }
    if (demo_cmd->parsed()) {
      emit(write_xes(generate_demo_log(seed, cases)), output);
      return 0;
    }
    if (stats_cmd->parsed()) {
      const EventLog log = apply_filter(stats_in.load(), load_filter(stats_filter));
      std::cout << statistics_to_json(log_statistics(log)).dump(2) << '\n';
      return 0;
    }
    if (variants_cmd->parsed()) {
      emit(export_variants_csv(apply_filter(variants_in.load(), load_filter(variants_filter))), output);
      return 0;
    }
    if (convert_cmd->parsed()) {
      emit(write_xes(apply_filter(convert_in.load(), load_filter(convert_filter))), output);
      return 0;
    }
    if (discover_cmd->parsed()) {
      const Metric metric = Metric::parse(metric_name);
      const Dfg dfg = discover_dfg(apply_filter(discover_in.load(), load_filter(discover_filter)));
      emit(discover_format == "dot" ? export_dot(dfg, metric) : dfg_to_json(dfg).dump(2) + "\n", output);
      return 0;
    }
    if (compare_cmd->parsed()) {
      const Metric metric = Metric::parse(metric_name);
      const EventLog log = compare_in.load();
      const ComparisonResult result = compare(make_slice(log, left_label, load_filter(left_filter)),
                                              make_slice(log, right_label, load_filter(right_filter)));
      std::string text;
      if (compare_format == "json") text = comparison_to_json(result, metric).dump(2) + "\n";
      else if (compare_format == "html") text = export_comparison_report(result, metric);
      else if (compare_format == "dot-left") text = export_dot(result.left.dfg, metric, highlight_classes(result, Side::Left));
      else text = export_dot(result.right.dfg, metric, highlight_classes(result, Side::Right));
      emit(text, output);
      return 0;
    }
  } catch (const cpm::Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
