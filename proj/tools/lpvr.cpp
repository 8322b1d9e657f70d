// lpvr: realization and structural analysis of LPV input-output models.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lpvr/analysis.hpp"
#include "lpvr/corpus.hpp"
#include "lpvr/model_io.hpp"
#include "lpvr/realization.hpp"
#include "lpvr/report.hpp"
#include "lpvr/simulate.hpp"
#include "lpvr/trajectory_io.hpp"
#include "lpvr/version.hpp"

namespace {

using ojson = nlohmann::ordered_json;

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw lpvr::ParseError(what + ": '" + s + "' is not a number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/// "lo:hi:count[,lo:hi:count...]"
std::vector<lpvr::GridAxis> parse_grid(const std::string& spec) {
    std::vector<lpvr::GridAxis> axes;
    for (const auto& part : split(spec, ',')) {
        const auto f = split(part, ':');
        if (f.size() != 3) {
            throw lpvr::ParseError("--grid: expected lo:hi:count, got '" + part + "'");
        }
        lpvr::GridAxis a;
        a.lo = parse_double(f[0], "--grid lo");
        a.hi = parse_double(f[1], "--grid hi");
        const double n = parse_double(f[2], "--grid count");
        if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) {
            throw lpvr::ParseError("--grid: count must be a positive integer, got '" + f[2] + "'");
        }
        a.count = static_cast<std::size_t>(n);
        axes.push_back(a);
    }
    return axes;
}

lpvr::Vector parse_point(const std::string& spec) {
    const auto f = split(spec, ',');
    lpvr::Vector p(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) {
        p[static_cast<Eigen::Index>(i)] = parse_double(f[i], "--at");
    }
    return p;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw lpvr::Error("cannot write file '" + path + "'");
    }
    out << text;
}

ojson matrix_rows(const lpvr::Matrix& m) {
    auto out = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        out.push_back(row);
    }
    return out;
}

int cmd_check(const std::string& model_path, const lpvr::AnalysisConfig& cfg, const std::string& out) {
    const auto model = lpvr::load_model_file(model_path);
    const auto rep = lpvr::analyze(model, cfg);
    write_output(out, lpvr::report_to_text(rep));
    return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& u_path, const std::string& p_path,
                 const std::string& out) {
    const auto model = lpvr::load_model_file(model_path);
    const auto u = lpvr::table_to_signal(lpvr::load_table(u_path));
    const auto p = lpvr::table_to_scheduling(lpvr::load_table(p_path));
    const auto y = lpvr::simulate_io(model, u, p);
    write_output(out, lpvr::format_table(lpvr::signal_to_table(y, "y")));
    return 0;
}

int cmd_realize(const std::string& model_path, const std::string& at, const std::string& out) {
    const auto model = lpvr::load_model_file(model_path);
    const auto r = lpvr::build_direct(model);
    const auto m = lpvr::eval_realization(r, parse_point(at));
    ojson o;
    o["tool"] = "lpvr";
    o["version"] = lpvr::kVersion;
    o["kind"] = lpvr::to_string(r.kind());
    o["n_x"] = r.n_x();
    o["p"] = ojson::array();
    for (Eigen::Index i = 0; i < m.p.size(); ++i) {
        o["p"].push_back(m.p[i]);
    }
    o["F"] = matrix_rows(m.F);
    o["G"] = matrix_rows(m.G);
    o["H"] = matrix_rows(m.H);
    o["J"] = matrix_rows(m.J);
    write_output(out, o.dump(2) + "\n");
    return 0;
}

int cmd_run_all(const std::vector<std::string>& only, bool json) {
    for (const auto& id : only) {
        (void)lpvr::builtin(id); // unknown ids are a usage error
    }
    const auto rows = lpvr::run_all(only);
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
    }
    if (json) {
        auto arr = ojson::array();
        for (const auto& r : rows) {
            ojson j;
            j["example"] = r.example;
            j["fact"] = r.fact;
            j["expected"] = r.expected;
            j["got"] = r.got;
            j["tolerance"] = r.tolerance;
            j["provenance"] = r.provenance;
            j["pass"] = r.pass;
            arr.push_back(j);
        }
        ojson o;
        o["tool"] = "lpvr";
        o["version"] = lpvr::kVersion;
        o["all_pass"] = all;
        o["facts"] = arr;
        std::cout << o.dump(2) << "\n";
    } else {
        std::size_t passed = 0;
        for (const auto& r : rows) {
            passed += r.pass ? 1 : 0;
            std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.example << "  " << r.fact << "\n"
                      << "      expected: " << r.expected << "\n"
                      << "      got:      " << r.got << "\n";
        }
        std::cout << passed << "/" << rows.size() << " facts pass\n";
    }
    return all ? 0 : 1;
}

int cmd_export(const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto save = [&](const std::string& name, const lpvr::LpvIoModel& m) {
        const auto path = (std::filesystem::path(dir) / (name + ".json")).string();
        write_output(path, lpvr::serialize_model(m));
        std::cout << path << "\n";
    };
    for (const auto& id : lpvr::builtin_ids()) {
        const auto c = lpvr::builtin(id);
        save(id, c.model);
        if (c.reconstructed) {
            save(id + "_reconstructed", *c.reconstructed);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direct state-space realization and structural analysis of LPV input-output models"};
    app.set_version_flag("--version", std::string(lpvr::kVersion));
    app.require_subcommand(1);

    std::string model_path;
    std::string out;

    auto* check = app.add_subcommand("check", "analyze reachability, observability and reconstructability");
    lpvr::AnalysisConfig cfg;
    std::string grid;
    check->add_option("model", model_path, "model file")->required();
    check->add_option("--grid", grid, "grid box, lo:hi:count per scheduling dimension, comma-separated");
    check->add_option("--points-per-dim", cfg.grid_points_per_dim, "grid points per dimension over the model domain")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    check->add_option("--rank-eps-scale", cfg.rank_epsilon_scale, "rank tolerance as a multiple of machine epsilon")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    check->add_option("--horizon", cfg.horizon, "observability horizon k (0 means n_x)")->capture_default_str();
    check->add_option("--trials", cfg.trial_count, "random scheduling trials")->capture_default_str();
    check->add_option("--seed", cfg.seed, "seed for random trials")->capture_default_str();
    check->add_option("-o,--output", out, "report path (default stdout)");

    auto* sim = app.add_subcommand("simulate", "simulate the input-output model from rest");
    std::string u_path;
    std::string p_path;
    sim->add_option("model", model_path, "model file")->required();
    sim->add_option("--u", u_path, "input trajectory (CSV with header)")->required();
    sim->add_option("--p", p_path, "scheduling trajectory (CSV with header)")->required();
    sim->add_option("--out", out, "output trajectory path (default stdout)");

    auto* realize = app.add_subcommand("realize", "print the direct realization at a frozen scheduling point");
    std::string at;
    realize->add_option("model", model_path, "model file")->required();
    realize->add_option("--at", at, "scheduling point, comma-separated")->required();
    realize->add_option("-o,--output", out, "output path (default stdout)");

    auto* ex = app.add_subcommand("examples", "built-in example corpus");
    ex->require_subcommand(1);
    auto* run_all = ex->add_subcommand("run-all", "check every expected fact; exit 0 iff all pass");
    std::vector<std::string> only;
    bool json = false;
    run_all->add_option("--only", only, "restrict to these example ids");
    run_all->add_flag("--json", json, "machine-readable fact table");
    auto* exp = ex->add_subcommand("export", "write the example models as model files");
    std::string dir;
    exp->add_option("dir", dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            if (!grid.empty()) {
                cfg.grid = parse_grid(grid);
            }
            return cmd_check(model_path, cfg, out);
        }
        if (*sim) {
            return cmd_simulate(model_path, u_path, p_path, out);
        }
        if (*realize) {
            return cmd_realize(model_path, at, out);
        }
        if (*run_all) {
            return cmd_run_all(only, json);
        }
        if (*exp) {
            return cmd_export(dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "lpvr: error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
