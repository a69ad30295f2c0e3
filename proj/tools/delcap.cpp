// delcap: capacity bound curves and verification suites for 2K-ary i.i.d.
// deletion channels.
//
// Exit codes: 0 success, 1 usage, 2 data-format, 3 verification-failure,
// 4 budget-exceeded.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delcap/report.hpp"

namespace {

delcap::DGrid parse_grid(const std::string& spec) {
  delcap::DGrid g;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--d-grid", "expected start:stop:step");
  try {
    g.start = std::stod(spec.substr(0, c1));
    g.stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--d-grid", "malformed numeric value in start:stop:step");
  }
  return g;
}

// key=value config file; flags already on the command line win
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    const std::string flag = "--" + line.substr(0, eq);
    bool given = false;
    for (const auto& a : args)
      given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) {
      args.push_back(flag);
      args.push_back(line.substr(eq + 1));
    }
  }
  return args;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << payload;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity bounds for 2K-ary i.i.d. deletion channels"};
  app.require_subcommand(1);

  std::vector<int> k_list;
  std::string grid_spec = "0:1:0.01";
  std::vector<std::string> bound_names;
  std::string table_path, out_path;
  double tol = 1e-7;
  int baa_l = 2;
  std::uint64_t seed = 1;
  std::string suite;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", "plain key=value config file; command line overrides file")
        ->type_name("PATH");
    sub->add_option("--k", k_list, "alphabet half-size K (repeatable)");
    sub->add_option("--d-grid", grid_spec, "deletion probability grid start:stop:step");
    sub->add_option("--binary-ub-table", table_path, "CSV table of binary-channel upper bounds");
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--tol", tol, "numeric tolerance / BAA stopping gap");
    sub->add_option("--baa-L", baa_l, "BAA block length L");
    sub->add_option("--seed", seed, "seed for randomized checks");
  };

  auto* curves = app.add_subcommand("curves", "emit bound curves as CSV");
  curves->add_option("--bounds", bound_names,
                     "comma-separated bound kinds (erasure-ub,iid-lb,markov-lb,theorem1-ub,smalld-ub)")
      ->delimiter(',');
  add_common(curves);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "one of: decomposition, lemmas, appendices, baa-consistency, bound-ordering")
      ->required();
  add_common(verify);

  auto* improvement = app.add_subcommand("improvement", "emit erasure_ub - theorem1_ub table");
  add_common(improvement);

  auto* baa = app.add_subcommand("baa", "Blahut-Arimoto finite-length capacity");
  add_common(baa);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config_file(args);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    std::optional<delcap::BinaryUbTable> table;
    if (!table_path.empty()) table = delcap::BinaryUbTable::load(table_path);
    const delcap::BinaryUbTable* table_ptr = table ? &*table : nullptr;

    if (app.got_subcommand(curves)) {
      delcap::RunConfig cfg;
      cfg.k_list = k_list.empty() ? std::vector<int>{1} : k_list;
      cfg.d_grid = parse_grid(grid_spec);
      if (bound_names.empty())
        throw std::invalid_argument("curves: --bounds must name at least one bound kind");
      for (const auto& name : bound_names) cfg.kinds.push_back(delcap::kind_from_name(name));
      cfg.table = table;
      write_output(out_path, delcap::run_curves(cfg));
    } else if (app.got_subcommand(verify)) {
      const auto rep = delcap::run_verification(suite, table_ptr);
      write_output(out_path, rep.format());
      if (!rep.all_pass()) return 3;
    } else if (app.got_subcommand(improvement)) {
      const auto ks = k_list.empty() ? std::vector<int>{1} : k_list;
      write_output(out_path, delcap::improvement_table(ks, parse_grid(grid_spec), table_ptr));
    } else if (app.got_subcommand(baa)) {
      const auto ks = k_list.empty() ? std::vector<int>{1} : k_list;
      std::ostringstream out;
      out << "k,l,d,capacity_per_symbol,iterations,final_gap\n";
      for (int k : ks)
        for (double d : parse_grid(grid_spec).values()) {
          delcap::BaaProblem pb;
          pb.l = baa_l;
          pb.params = {k, d};
          pb.tolerance = tol;
          const auto res = delcap::baa_capacity(pb);
          out << k << ',' << baa_l << ',' << delcap::detail::fmt9(d) << ','
              << delcap::detail::fmt9(res.capacity_per_symbol) << ',' << res.iterations << ','
              << delcap::detail::fmt9(res.final_gap) << '\n';
        }
      write_output(out_path, out.str());
    }
  } catch (const delcap::data_format_error& e) {
    std::cerr << "data-format error: " << e.what() << "\n";
    return 2;
  } catch (const delcap::budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.get_name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
