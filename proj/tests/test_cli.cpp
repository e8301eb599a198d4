// test_cli.cpp — end-to-end checks of the qctrl command-line driver

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_qctrl;
fs::path g_dir;

void check(bool ok, const std::string& label, const std::string& detail = "") {
  if (ok) {
    std::cout << "ok: " << label << '\n';
  } else {
    ++g_failures;
    std::cout << "FAILED: " << label << '\n';
    if (!detail.empty()) std::cout << "  " << detail << '\n';
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// Runs the binary with the given arguments, captures stdout+stderr, returns the exit code.
int run_cli(const std::string& args, std::string* captured = nullptr) {
  const fs::path log = g_dir / "last_output.txt";
  const std::string command =
      "\"" + g_qctrl + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  if (captured != nullptr) *captured = slurp(log);
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> values;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) values.push_back(std::stod(field));
  return values;
}

void test_help_and_parse_errors() {
  check(run_cli("--help") == 0, "--help exits 0");
  check(run_cli("") == 1, "missing subcommand exits 1");
  check(run_cli("frobnicate") == 1, "unknown subcommand exits 1");
  check(run_cli("simulate --samples 1") == 1, "out-of-range --samples exits 1");

  std::string text;
  check(run_cli("simulate --protocol does_not_exist", &text) == 1,
        "unknown protocol exits 1");
  check(contains(text, "config error"), "unknown protocol reports a config error", text);

  const fs::path bad = g_dir / "bad_config.json";
  write_file(bad, "{\"unknown_section\": {}}\n");
  check(run_cli("simulate --config \"" + bad.string() + "\"", &text) == 1,
        "unknown config key exits 1");
  check(contains(text, "config error"), "unknown config key reports a config error", text);

  const fs::path broken = g_dir / "broken_protocol.json";
  write_file(broken, "{oops\n");
  check(run_cli("simulate --protocol \"" + broken.string() + "\"") == 1,
        "malformed protocol file exits 1");
}

void test_simulate() {
  const fs::path csv = g_dir / "sim.csv";
  std::string text;
  const int code = run_cli("simulate --T 40 --protocol protocol1_T40 --samples 2001 --out \"" +
                               csv.string() + "\"",
                           &text);
  check(code == 0, "simulate exits 0", text);
  check(contains(text, "final rho_ff = "), "simulate prints the final population", text);
  check(!contains(text, "sink on"), "simulate is closed by default", text);

  const auto lines = read_lines(csv);
  check(lines.size() == 2002, "simulate writes one row per sample");
  check(lines.at(0) == "t,rho_gg,rho_ee,rho_ff,rho_ss,delta_p,delta",
        "simulate CSV header", lines.empty() ? "" : lines[0]);

  const auto first = parse_row(lines.at(1));
  const auto last = parse_row(lines.back());
  check(first.size() == 7 && last.size() == 7, "simulate rows have 7 columns");
  check(first[0] == 0.0 && first[1] == 1.0 && first[2] == 0.0 && first[3] == 0.0,
        "trajectory starts in the ground state");
  check(std::abs(last[0] - 40.0) < 1e-9, "trajectory ends at t = T");
  check(std::abs(last[3] - 0.9994) < 0.002, "final transfer matches the published protocol",
        "rho_ff = " + std::to_string(last[3]));

  const fs::path leaky = g_dir / "sim_sink.csv";
  check(run_cli("simulate --T 40 --sink on --samples 101 --out \"" + leaky.string() + "\"",
                &text) == 0,
        "simulate --sink on exits 0", text);
  check(contains(text, "(sink on)"), "simulate reports the open system", text);
  const auto leaky_last = parse_row(read_lines(leaky).back());
  check(leaky_last[4] > 1e-4, "leaky run accumulates sink population",
        "rho_ss = " + std::to_string(leaky_last[4]));
}

void test_simulate_short_duration() {
  const fs::path csv = g_dir / "sim_tiny.csv";
  check(run_cli("simulate --T 1e-9 --samples 11 --out \"" + csv.string() + "\"") == 0,
        "simulate with T = 1e-9 exits 0");
  const auto lines = read_lines(csv);
  const auto first = parse_row(lines.at(1));
  const auto last = parse_row(lines.back());
  bool frozen = true;
  for (int k = 1; k <= 4; ++k) frozen = frozen && std::abs(last[k] - first[k]) < 1e-9;
  check(frozen, "populations are frozen over a vanishing duration");
}

void test_simulate_protocol_file() {
  const fs::path proto = g_dir / "flat.json";
  write_file(proto, "{\"family\": \"raman\", \"dp\": 0.0}\n");
  std::string text;
  check(run_cli("simulate --T 10 --protocol \"" + proto.string() + "\"", &text) == 0,
        "simulate accepts a schedule JSON file", text);
}

void test_train_determinism() {
  const fs::path cfg = g_dir / "train_config.json";
  write_file(cfg, R"({
  "train": {
    "n_batch": 4, "n_epochs": 5, "n_steps": 8, "T": 5.0,
    "ranges": [14.0, 0.2], "sigma": [0.07, 0.07], "sink_rate": 2.0,
    "dims": {"input": 1, "lstm": 6, "dense": 5, "out": 2},
    "seed": 11
  }
})");

  const fs::path curve1 = g_dir / "curve1.csv", curve2 = g_dir / "curve2.csv";
  const fs::path ckpt1 = g_dir / "ckpt1.json", ckpt2 = g_dir / "ckpt2.json";
  std::string text;
  const std::string base = "train --config \"" + cfg.string() + "\"";
  check(run_cli(base + " --out \"" + curve1.string() + "\" --checkpoint \"" + ckpt1.string() +
                    "\"",
                &text) == 0,
        "train exits 0", text);
  check(contains(text, "best greedy fidelity"), "train reports its best fidelity", text);
  check(run_cli(base + " --out \"" + curve2.string() + "\" --checkpoint \"" + ckpt2.string() +
                "\"") == 0,
        "second train exits 0");

  const std::string bytes1 = slurp(curve1), bytes2 = slurp(curve2);
  check(!bytes1.empty() && bytes1 == bytes2, "learning curves are byte-identical");
  check(slurp(ckpt1) == slurp(ckpt2), "checkpoints are byte-identical");

  const auto lines = read_lines(curve1);
  check(lines.size() == 6, "curve has one row per epoch");
  check(lines.at(0) == "epoch,mean_reward,max_reward,baseline,greedy_fidelity",
        "curve CSV header", lines.empty() ? "" : lines[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_row(lines[i]);
    if (!(row[1] <= row[2] + 1e-12 && row[1] == row[3])) {
      check(false, "epoch stats are consistent", lines[i]);
      return;
    }
  }
  check(true, "epoch stats are consistent");

  check(run_cli("checkpoint-info \"" + ckpt1.string() + "\"", &text) == 0,
        "checkpoint-info exits 0", text);
  check(contains(text, "parameters") && contains(text, "epochs done"),
        "checkpoint-info summarizes the run", text);
  check(run_cli("checkpoint-info") == 1, "checkpoint-info without a path exits 1");
  check(run_cli("checkpoint-info \"" + (g_dir / "missing.json").string() + "\"") == 1,
        "checkpoint-info on a missing file exits 1");
}

void test_numerical_failure_exit_code() {
  const fs::path cfg = g_dir / "degenerate.json";
  write_file(cfg, R"({
  "train": {
    "n_batch": 2, "n_epochs": 1, "n_steps": 4, "T": 1.0,
    "sigma": [1e-300, 1e-300],
    "dims": {"input": 1, "lstm": 3, "dense": 3, "out": 2},
    "seed": 1
  }
})");
  std::string text;
  check(run_cli("train --config \"" + cfg.string() + "\"", &text) == 2,
        "degenerate exploration noise exits 2", text);
  check(contains(text, "numerical failure"), "exit 2 is reported as a numerical failure", text);
}

void test_optimizers() {
  const fs::path cfg = g_dir / "optimize_config.json";
  write_file(cfg, R"({
  "optimize": {
    "order": 1, "n_runs": 2,
    "powell": {"max_iter": 5, "max_line_evals": 30, "restarts": 1, "init_range": [-5.0, 5.0]}
  }
})");

  const fs::path poly_out = g_dir / "poly.json";
  std::string text;
  check(run_cli("optimize-poly --config \"" + cfg.string() + "\" --T 20 --seed 5 --out \"" +
                    poly_out.string() + "\"",
                &text) == 0,
        "optimize-poly exits 0", text);
  check(contains(text, "best score"), "optimize-poly reports its score", text);
  const std::string poly_doc = slurp(poly_out);
  for (const char* key : {"\"schedule\"", "\"score\"", "\"run_scores\"", "\"n_evals\"", "\"poly\""})
    if (!contains(poly_doc, key)) {
      check(false, std::string("optimize-poly JSON contains ") + key, poly_doc);
      return;
    }
  check(true, "optimize-poly JSON has the expected fields");

  const fs::path ansatz_out = g_dir / "ansatz.json";
  check(run_cli("optimize-ansatz --family ansatz1 --config \"" + cfg.string() +
                    "\" --T 20 --seed 5 --out \"" + ansatz_out.string() + "\"",
                &text) == 0,
        "optimize-ansatz exits 0", text);
  check(contains(slurp(ansatz_out), "\"ansatz1\""), "optimize-ansatz fits the requested family");
  check(run_cli("optimize-ansatz --family cubic") == 1, "unknown ansatz family exits 1");
}

void test_sweep() {
  const fs::path cfg = g_dir / "sweep_config.json";
  write_file(cfg, R"({
  "system": {"T": 20.0},
  "protocol": "protocol1",
  "sweep": {
    "scenario": "lambda",
    "axes": [{"name": "gamma_eg", "min": 0.0, "max": 0.5, "n_points": 3}],
    "trajectory_samples": 201
  }
})");
  const fs::path csv = g_dir / "sweep.csv";
  std::string text;
  check(run_cli("sweep --config \"" + cfg.string() + "\" --out \"" + csv.string() + "\"",
                &text) == 0,
        "sweep exits 0", text);
  check(contains(text, "3 grid points"), "sweep reports the grid size", text);

  const auto lines = read_lines(csv);
  check(lines.size() == 4, "sweep CSV has one row per grid point");
  check(lines.at(0) == "gamma_eg,final_rho_ff,max_rho_ee", "sweep CSV header",
        lines.empty() ? "" : lines[0]);
  const auto clean = parse_row(lines.at(1));
  const auto noisy = parse_row(lines.at(3));
  check(clean[0] == 0.0 && noisy[0] == 0.5, "sweep coordinates span the axis");
  check(clean[1] > 0.99 && noisy[1] < clean[1],
        "decay from the intermediate level degrades the transfer",
        "f(0) = " + std::to_string(clean[1]) + ", f(0.5) = " + std::to_string(noisy[1]));

  check(run_cli("sweep --T 20") == 1, "sweep without a config section exits 1");
}

void test_scans() {
  const fs::path scan_csv = g_dir / "scan.csv";
  std::string text;
  check(run_cli("scan-time --protocol protocol1_T20 --tmin 20 --tmax 24 --points 2 --out \"" +
                    scan_csv.string() + "\"",
                &text) == 0,
        "scan-time exits 0", text);
  check(contains(text, "2 durations scanned"), "scan-time reports the grid", text);
  const auto scan_lines = read_lines(scan_csv);
  check(scan_lines.size() == 3 && scan_lines.at(0) == "T,final_rho_ff,max_rho_ee",
        "scan-time CSV shape", scan_lines.empty() ? "" : scan_lines[0]);
  check(parse_row(scan_lines.at(1))[0] == 20.0 && parse_row(scan_lines.at(2))[0] == 24.0,
        "scan-time covers the requested durations");

  const fs::path raman_csv = g_dir / "raman.csv";
  check(run_cli("raman-scan --T 20 --dpmin -2 --dpmax 2 --points 3 --out \"" +
                    raman_csv.string() + "\"",
                &text) == 0,
        "raman-scan exits 0", text);
  check(contains(text, "best constant-detuning transfer") &&
            contains(text, "protocol-1 reference"),
        "raman-scan prints the comparison", text);
  const auto raman_lines = read_lines(raman_csv);
  check(raman_lines.size() == 4 && raman_lines.at(0) == "delta_p,final_rho_ff,max_rho_ee",
        "raman-scan CSV shape", raman_lines.empty() ? "" : raman_lines[0]);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: qctrl_cli_tests <path to qctrl binary>\n";
    return 2;
  }
  g_qctrl = argv[1];
  if (!fs::exists(g_qctrl)) {
    std::cerr << "qctrl binary not found: " << g_qctrl << '\n';
    return 2;
  }
  g_dir = fs::temp_directory_path() / ("qctrl_cli_" + std::to_string(::getpid()));
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  test_help_and_parse_errors();
  test_simulate();
  test_simulate_short_duration();
  test_simulate_protocol_file();
  test_train_determinism();
  test_numerical_failure_exit_code();
  test_optimizers();
  test_sweep();
  test_scans();

  fs::remove_all(g_dir);
  if (g_failures > 0) {
    std::cout << g_failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}
