#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsp/curve.hpp"
#include "hsp/io.hpp"
#include "hsp/measures.hpp"
#include "hsp/recurrence.hpp"
#include "hsp/support.hpp"
#include "hsp/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hsp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string pencil_path;
  std::vector<int> ns{55};
  std::vector<int> families;
  int order = 20;
  double radius = 0;
  std::vector<double> rect{-2.5, -2.5, 2.5, 2.5};
  double res = 0.05;
  std::string out = ".";
  int digits = 17;
  int jobs = 1;
};

Pencil resolve_pencil(const Options& opt) {
  if (opt.pencil_path.empty()) return fixture_pencil();
  return load_pencil(opt.pencil_path);
}

std::vector<int> resolve_families(const Options& opt, const Pencil& P) {
  if (!opt.families.empty()) return opt.families;
  std::vector<int> all;
  for (int j = 1; j <= P.order(); ++j) all.push_back(j);
  return all;
}

std::string cpx(cxd z, int digits) {
  return format_real(z.real(), digits) + (z.imag() < 0 ? "" : "+") +
         format_real(z.imag(), digits) + "i";
}

int cmd_check(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  auto rep = validate_general_type(P);
  json alphas = json::array();
  for (cxd a : rep.alphas) alphas.push_back({a.real(), a.imag()});
  json doc{{"leading_ok", rep.leading_ok},
           {"constant_ok", rep.constant_ok},
           {"roots_distinct", rep.roots_distinct},
           {"no_collinear_pair", rep.no_collinear_pair},
           {"general_type", rep.general_type()},
           {"alphas", alphas},
           {"pencil_hash", pencil_hash(P)}};
  std::cout << doc.dump(2) << "\n";
  return rep.general_type() ? kExitOk : kExitDomain;
}

int cmd_eigen(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  auto rep = validate_general_type(P);
  if (!rep.general_type()) {
    std::cerr << "pencil is not of general type\n";
    return kExitDomain;
  }
  fs::create_directories(opt.out);
  std::string hash = pencil_hash(P);
  auto families = resolve_families(opt, P);

  struct Item {
    int n, j;
    EigenSolution sol;
    std::string error;
  };
  std::vector<Item> items;
  for (int n : opt.ns)
    for (int j : families) items.push_back({n, j, {}, ""});

  auto work = [&](Item& it) {
    try {
      cxd lam = spectral_eigenvalues(P, it.n).lambda_for(it.j);
      it.sol = eigen_solution(P, it.n, it.j, lam);
    } catch (const std::exception& ex) {
      it.error = ex.what();
    }
  };
  if (opt.jobs <= 1) {
    for (auto& it : items) work(it);
  } else {
    std::vector<std::future<void>> fut;
    std::atomic<size_t> next{0};
    for (int t = 0; t < opt.jobs; ++t)
      fut.push_back(std::async(std::launch::async, [&] {
        for (size_t i = next++; i < items.size(); i = next++) work(items[i]);
      }));
    for (auto& f : fut) f.get();
  }

  bool any_fail = false;
  std::vector<std::vector<std::string>> summary;
  for (const auto& it : items) {
    if (!it.error.empty()) {
      std::cerr << "n=" << it.n << " j=" << it.j << " failed: " << it.error << "\n";
      any_fail = true;
      continue;
    }
    std::string stem =
        opt.out + "/eigen_n" + std::to_string(it.n) + "_j" + std::to_string(it.j);
    write_points_csv(stem + "_roots.csv", hash, it.sol.roots, opt.digits);
    std::vector<std::vector<std::string>> coeff_rows;
    for (int m = 0; m <= it.sol.p.degree(); ++m)
      coeff_rows.push_back({std::to_string(m),
                            format_real(it.sol.p.coeff(m).real(), opt.digits),
                            format_real(it.sol.p.coeff(m).imag(), opt.digits)});
    write_csv(stem + "_coeffs.csv", hash, {"index", "re", "im"}, coeff_rows,
              "lambda=" + cpx(it.sol.lambda, opt.digits) +
                  " residual=" + format_real(it.sol.residual, 3));
    cxd ratio = it.sol.lambda / double(it.n);
    cxd alpha = rep.alphas[it.j - 1];
    summary.push_back({std::to_string(it.n), std::to_string(it.j),
                       format_real(it.sol.lambda.real(), opt.digits),
                       format_real(it.sol.lambda.imag(), opt.digits),
                       format_real(ratio.real(), opt.digits),
                       format_real(ratio.imag(), opt.digits),
                       format_real(std::abs(ratio - alpha), 6)});
  }
  write_csv(opt.out + "/eigen_summary.csv", hash,
            {"n", "j", "lambda_re", "lambda_im", "ratio_re", "ratio_im",
             "abs_ratio_minus_alpha"},
            summary);
  return any_fail ? kExitDomain : kExitOk;
}

int cmd_fig1(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  fs::create_directories(opt.out);
  PlaneCurve curve(P);
  auto bps = branch_points(curve);
  int n = opt.ns.empty() ? 55 : opt.ns.front();
  auto families = resolve_families(opt, P);
  static const char* colors[] = {"#1f6fb2", "#c23b22", "#2c8a4b", "#8a2c8a"};

  SvgGroup bp_group{bps, 6.0, "#000000", false};
  std::vector<SvgGroup> union_groups;
  int ci = 0;
  for (int j : families) {
    cxd lam = spectral_eigenvalues(P, n).lambda_for(j);
    auto sol = eigen_solution(P, n, j, lam);
    SvgGroup g{sol.roots, 2.5, colors[ci % 4], false};
    write_svg_scatter(opt.out + "/roots_family" + std::to_string(j) + ".svg",
                      {g, bp_group},
                      "family " + std::to_string(j) + " roots, n=" + std::to_string(n) +
                          ", branch points: " + std::to_string(bps.size()));
    union_groups.push_back(g);
    ++ci;
  }
  union_groups.push_back(bp_group);
  write_svg_scatter(opt.out + "/roots_union.svg", union_groups,
                    "all families, n=" + std::to_string(n) +
                        ", branch points: " + std::to_string(bps.size()));
  return kExitOk;
}

int cmd_series(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  fs::create_directories(opt.out);
  std::string hash = pencil_hash(P);
  PlaneCurve curve(P);
  int n = opt.ns.empty() ? 55 : opt.ns.front();
  for (int j : resolve_families(opt, P)) {
    cxd lam = spectral_eigenvalues(P, n).lambda_for(j);
    auto p = eigenpolynomial(P, n, lam);
    auto ld = log_derivative_series(p, lam, opt.order);
    auto rec = solve_recurrence(P, lam, double(n) / lam, opt.order);
    auto bs = branch_series_at_infinity(curve, j, opt.order);
    std::string stem =
        opt.out + "/series_n" + std::to_string(n) + "_j" + std::to_string(j);
    write_series_csv(stem + "_logderiv.csv", hash, ld, opt.digits);
    write_series_csv(stem + "_recurrence.csv", hash, rec, opt.digits);
    write_series_csv(stem + "_branch.csv", hash, bs.series, opt.digits);
  }
  return kExitOk;
}

int cmd_support(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  fs::create_directories(opt.out);
  std::string hash = pencil_hash(P);
  Rect rect{opt.rect[0], opt.rect[1], opt.rect[2], opt.rect[3]};
  auto families = resolve_families(opt, P);
  int n = opt.ns.empty() ? 55 : opt.ns.front();

  if (P.order() >= 3) {
    auto locus = gamma_locus(P, families.front(), {1, 2, 3}, rect, opt.res);
    write_points_csv(opt.out + "/gamma_locus.csv", hash, locus.points, opt.digits);
    write_svg_scatter(opt.out + "/gamma_locus.svg",
                      {SvgGroup{locus.points, 1.5, "#2c8a4b", false}}, "collinearity locus");
  }

  for (int j : families) {
    cxd lam = spectral_eigenvalues(P, n).lambda_for(j);
    auto sol = eigen_solution(P, n, j, lam);
    // seed the trace at the atom with the tightest 3rd-nearest neighbor
    cxd seed = sol.roots.front();
    double best = 1e300;
    for (cxd a : sol.roots) {
      std::vector<double> d;
      for (cxd b : sol.roots)
        if (b != a) d.push_back(std::abs(a - b));
      std::nth_element(d.begin(), d.begin() + 2, d.end());
      if (d[2] < best) {
        best = d[2];
        seed = a;
      }
    }
    LevelCurve bestlc;
    int bestscore = -1;
    for (int i = 1; i <= P.order(); ++i)
      for (int l = i + 1; l <= P.order(); ++l) {
        try {
          auto lc = trace_level_curve(P, j, {i, l}, seed, 0.02, 8.0);
          int score = 0;
          for (cxd a : sol.roots) {
            double dmin = 1e300;
            for (cxd v : lc.points) dmin = std::min(dmin, std::abs(a - v));
            if (dmin <= 0.1) ++score;
          }
          if (score > bestscore) {
            bestscore = score;
            bestlc = lc;
          }
        } catch (const std::runtime_error&) {
        }
      }
    if (bestscore < 0) {
      std::cerr << "family " << j << ": no traceable level curve\n";
      return kExitDomain;
    }
    write_level_curve_csv(opt.out + "/level_curve_j" + std::to_string(j) + ".csv", hash,
                          bestlc, opt.digits);
    write_svg_scatter(opt.out + "/level_curve_j" + std::to_string(j) + ".svg",
                      {SvgGroup{sol.roots, 2.5, "#1f6fb2", false},
                       SvgGroup{bestlc.points, 1.5, "#c23b22", true}},
                      "level curve and roots, family " + std::to_string(j));
  }
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  Pencil P = resolve_pencil(opt);
  auto results = run_acceptance(P);
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
    all = all && r.pass;
  }
  json doc{{"pencil_hash", pencil_hash(P)}, {"all_pass", all}, {"criteria", arr}};
  std::cout << doc.dump(2) << "\n";
  return all ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for spectral pencils of exactly solvable operators"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--pencil", opt.pencil_path, "pencil JSON file (default: built-in fixture)");
  app.add_option("--n", opt.ns, "eigenpolynomial degrees")->delimiter(',');
  app.add_option("--family", opt.families, "eigenvalue family labels")->delimiter(',');
  app.add_option("--order", opt.order, "series truncation order");
  app.add_option("--radius", opt.radius, "sampling circle radius");
  app.add_option("--rect", opt.rect, "grid rectangle x0,y0,x1,y1")
      ->delimiter(',')
      ->expected(4);
  app.add_option("--res", opt.res, "grid resolution");
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--digits", opt.digits, "output digit count");
  app.add_option("--jobs", opt.jobs, "parallel worker count");

  auto* check = app.add_subcommand("check", "validate the general-type conditions");
  auto* eigen = app.add_subcommand("eigen", "eigenvalues, eigenpolynomials, roots");
  auto* fig1 = app.add_subcommand("fig1", "root-cloud figures with branch points");
  auto* series = app.add_subcommand("series", "series expansions by all routes");
  auto* support = app.add_subcommand("support", "collinearity locus and level curves");
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");
  // let the shared options above appear after the subcommand name
  for (auto* sub : {check, eigen, fig1, series, support, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(opt);
    if (eigen->parsed()) return cmd_eigen(opt);
    if (fig1->parsed()) return cmd_fig1(opt);
    if (series->parsed()) return cmd_series(opt);
    if (support->parsed()) return cmd_support(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const IoError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
