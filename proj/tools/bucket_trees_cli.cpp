#include <bucket_trees/bijections.hpp>
#include <bucket_trees/urn.hpp>
#include <bucket_trees/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace bt = bucket_trees;
using nlohmann::json;

namespace {

struct Globals {
  std::string family = "recursive:b=2";
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
};

class Output {
 public:
  explicit Output(const Globals& g) : doc_(g.format == "doc") {
    if (!g.out.empty()) {
      file_ = std::make_unique<std::ofstream>(g.out);
      if (!*file_) throw std::runtime_error("cannot open " + g.out);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  bool doc() const { return doc_; }
  void emit(const json& j) { os() << j.dump(2) << "\n"; }

 private:
  bool doc_;
  std::unique_ptr<std::ofstream> file_;
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    int b = std::stoi(s);
    return {b, b};
  }
  int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
  if (lo < 1 || hi < lo) throw std::invalid_argument("bad range " + s);
  return {lo, hi};
}

template <class T>
void write_pmf(Output& out, const bt::BasicPmf<T>& p, const std::string& column) {
  auto str = [](const T& v) {
    if constexpr (std::is_same_v<T, double>) return num(v);
    else return bt::to_string(v);
  };
  if (out.doc()) {
    json rows = json::array();
    for (const auto& [v, w] : p) rows.push_back({{column, v}, {"probability", str(w)}});
    out.emit(rows);
    return;
  }
  out.os() << column << ",probability\n";
  for (const auto& [v, w] : p) out.os() << v << "," << str(w) << "\n";
}

std::vector<std::string> read_inputs(const std::vector<std::string>& given) {
  if (!given.empty()) return given;
  std::vector<std::string> lines;
  for (std::string line; std::getline(std::cin, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bucket increasing trees: sampling, enumeration, distributions, urns and bijections"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--family", g.family, "family, e.g. recursive:b=2, ary:b=2,d=3, port:b=3,alpha=1")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "doc"}))->capture_default_str();
  app.add_option("--out", g.out, "output path (default stdout)");

  int n = 1, j = 1, count = 1, steps = 10, reps = 1000, cond = 0, b = 2;
  bool exact = false, limit = false;
  std::string pmf_stat, range, from = "tree", to = "bucket", level = "quick";
  std::vector<std::string> inputs;
  std::vector<int> criteria;

  auto* grow = app.add_subcommand("grow", "sample trees from the growth process");
  grow->add_option("--n", n, "size")->required()->check(CLI::PositiveNumber);
  grow->add_option("--count", count, "number of trees")->check(CLI::PositiveNumber);

  auto* enumerate = app.add_subcommand("enumerate", "list all trees of size n with exact weights");
  enumerate->add_option("--n", n, "size")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--pmf", pmf_stat, "emit the exact PMF of K, Y:j, X:j, N:k or tau:j instead");

  auto* pmfk = app.add_subcommand("pmf-k", "PMF of the initial bucket size K_n");
  pmfk->add_option("--n", n, "size")->check(CLI::PositiveNumber);
  pmfk->add_flag("--limit", limit, "limit law instead of finite n");
  pmfk->add_flag("--exact", exact, "exact fractions");

  auto* desc = app.add_subcommand("descendants", "PMF of Y_{n,j}");
  auto* degree = app.add_subcommand("degree", "PMF of X_{n,j}");
  auto* tau = app.add_subcommand("tau", "PMF of the saturation time of label j");
  for (auto* s : {desc, degree, tau}) {
    s->add_option("--n", n, "size")->required()->check(CLI::PositiveNumber);
    s->add_option("--j", j, "label")->required()->check(CLI::PositiveNumber);
    s->add_flag("--exact", exact, "exact fractions");
  }
  desc->add_option("--conditional", cond, "condition on K_j = l");

  auto* convert = app.add_subcommand("convert", "convert between plain trees, bucket trees and diamonds");
  convert->add_option("--from", from)->check(CLI::IsMember({"tree", "bucket", "diamond"}))->capture_default_str();
  convert->add_option("--to", to)->check(CLI::IsMember({"tree", "bucket", "diamond"}))->capture_default_str();
  convert->add_option("--b", b, "bucket capacity")->check(CLI::PositiveNumber)->capture_default_str();
  convert->add_option("input", inputs, "codec text (default: lines on stdin)");

  auto* urn = app.add_subcommand("urn", "simulate the urn model");
  urn->add_option("--steps", steps, "draws per replicate")->check(CLI::NonNegativeNumber);
  urn->add_option("--replicates", reps, "replicates")->check(CLI::PositiveNumber);

  auto* urn_spec = app.add_subcommand("urn-spectrum", "urn eigenvalues and phase indicators");
  auto* spectrum = app.add_subcommand("spectrum", "indicial roots and phase indicators");
  for (auto* s : {urn_spec, spectrum}) s->add_option("--b-range", range, "bucket sizes, e.g. 2..30");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  verify->add_option("--criterion", criteria, "subset of criteria")->check(CLI::Range(1, 8));

  CLI11_PARSE(app, argc, argv);

  try {
    const auto spec = bt::FamilySpec::parse(g.family);
    Output out(g);
    bt::RngStream rng(g.seed);

    if (*grow) {
      std::vector<std::string> trees;
      for (int i = 0; i < count; ++i) {
        auto r = rng.split(static_cast<std::uint64_t>(i));
        trees.push_back(bt::to_text(bt::sample_tree(spec, n, r)));
      }
      if (out.doc()) out.emit(trees);
      else
        for (auto& t : trees) out.os() << t << "\n";
    } else if (*enumerate) {
      if (!pmf_stat.empty()) {
        write_pmf(out, bt::exact_statistic_pmf(spec, n, bt::Statistic::parse(pmf_stat), {std::max(10, n)}), "value");
      } else {
        json rows = json::array();
        if (!out.doc()) out.os() << "tree,weight\n";
        bt::for_each_tree(
            spec, n,
            [&](const bt::BucketTree& t, const bt::Rational& w) {
              if (out.doc()) rows.push_back({{"tree", bt::to_text(t)}, {"weight", bt::to_string(w)}});
              else out.os() << "\"" << bt::to_text(t) << "\"," << bt::to_string(w) << "\n";
            },
            {std::max(10, n)});
        if (out.doc()) out.emit(rows);
      }
    } else if (*pmfk) {
      if (limit) exact ? write_pmf(out, bt::limit_K_exact(spec), "m") : write_pmf(out, bt::limit_K(spec), "m");
      else exact ? write_pmf(out, bt::pmf_K_exact(spec, n), "m") : write_pmf(out, bt::pmf_K(spec, n), "m");
    } else if (*desc) {
      if (cond) exact ? write_pmf(out, bt::pmf_Y_conditional_exact(spec, n, cond, j), "y")
                      : write_pmf(out, bt::pmf_Y_conditional(spec, n, cond, j), "y");
      else exact ? write_pmf(out, bt::pmf_Y_exact(spec, n, j), "y") : write_pmf(out, bt::pmf_Y(spec, n, j), "y");
    } else if (*degree) {
      exact ? write_pmf(out, bt::pmf_X_exact(spec, n, j), "x") : write_pmf(out, bt::pmf_X(spec, n, j), "x");
    } else if (*tau) {
      exact ? write_pmf(out, bt::pmf_tau_exact(spec, n, j), "t") : write_pmf(out, bt::pmf_tau(spec, n, j), "t");
    } else if (*convert) {
      json rows = json::array();
      for (const auto& text : read_inputs(inputs)) {
        std::string result;
        if (from == "diamond") {
          auto d = bt::parse_diamond(text);
          if (to == "diamond") result = bt::to_text(d);
          else if (to == "bucket") result = bt::to_text(bt::diamond_to_bucket(d));
          else result = bt::to_text(bt::debucket(bt::diamond_to_bucket(d)));
        } else {
          auto t = bt::parse_tree(text, from == "tree" ? 1 : b);
          if (to == "tree") result = bt::to_text(bt::debucket(t));
          else if (to == "bucket") result = bt::to_text(from == "tree" ? bt::cluster(t, b) : t);
          else {
            if (from == "bucket" && b != 2) throw std::invalid_argument("diamonds correspond to b=2 bucket trees");
            result = bt::to_text(bt::bucket_to_diamond(from == "tree" ? bt::cluster(t, 2) : t));
          }
        }
        if (out.doc()) rows.push_back({{"input", text}, {"output", result}});
        else out.os() << result << "\n";
      }
      if (out.doc()) out.emit(rows);
    } else if (*urn) {
      const auto u = bt::build_urn(spec);
      const auto bb = static_cast<std::size_t>(u.types());
      struct Acc {
        std::vector<double> balls, nodes;
        std::int64_t n = 0;
        void merge(const Acc& o) {
          if (balls.empty()) balls.assign(o.balls.size(), 0), nodes.assign(o.nodes.size(), 0);
          for (std::size_t i = 0; i < o.balls.size(); ++i) balls[i] += o.balls[i], nodes[i] += o.nodes[i];
          n += o.n;
        }
      };
      const double inv_scale = 1.0 / bt::to_double(bt::Rational(u.scale));
      auto acc = bt::monte_carlo<Acc>(g.seed, reps, [&](bt::RngStream& r, Acc& a) {
        if (a.balls.empty()) a.balls.assign(bb, 0), a.nodes.assign(bb, 0);
        bt::UrnSimulator sim(u);
        sim.reset();
        for (int s = 0; s < steps; ++s) sim.step(r);
        auto nodes = sim.node_counts();
        for (std::size_t i = 0; i < bb; ++i) {
          a.balls[i] += static_cast<double>(sim.counts()[i]) * inv_scale;
          a.nodes[i] += nodes[i];
        }
        ++a.n;
      });
      json rows = json::array();
      if (!out.doc()) out.os() << "steps,type,mean_balls,mean_nodes\n";
      for (std::size_t i = 0; i < bb; ++i) {
        double mb = acc.balls[i] / static_cast<double>(acc.n), mn = acc.nodes[i] / static_cast<double>(acc.n);
        if (out.doc()) rows.push_back({{"steps", steps}, {"type", i + 1}, {"mean_balls", mb}, {"mean_nodes", mn}});
        else out.os() << steps << "," << i + 1 << "," << num(mb) << "," << num(mn) << "\n";
      }
      if (out.doc()) out.emit(rows);
    } else if (*urn_spec || *spectrum) {
      auto [lo, hi] = range.empty() ? std::pair{spec.b(), spec.b()} : parse_range(range);
      json rows = json::array();
      if (!out.doc()) out.os() << "b,index,re,im,residual,re_lambda2,phase_indicator\n";
      for (int bb = lo; bb <= hi; ++bb) {
        const auto s = spec.with_b(bb);
        std::vector<bt::Complex> roots;
        std::vector<double> res;
        double phase = 0;
        if (*urn_spec) {
          auto us = bt::urn_spectrum(s);
          roots = us.eigenvalues, res = us.residuals, phase = us.phase_indicator;
        } else {
          const auto& ir = bt::indicial_roots(bb, bt::kappa(s));
          roots = ir.roots, res = ir.residuals;
          phase = roots.size() > 1 ? roots[1].real() / roots[0].real() : 0.0;
        }
        const double re2 = roots.size() > 1 ? roots[1].real() : 0.0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          if (out.doc())
            rows.push_back({{"b", bb}, {"index", i + 1}, {"re", roots[i].real()}, {"im", roots[i].imag()},
                            {"residual", res[i]}, {"re_lambda2", re2}, {"phase_indicator", phase}});
          else
            out.os() << bb << "," << i + 1 << "," << num(roots[i].real()) << "," << num(roots[i].imag()) << ","
                     << num(res[i]) << "," << num(re2) << "," << num(phase) << "\n";
        }
      }
      if (out.doc()) out.emit(rows);
    } else if (*verify) {
      auto report = bt::verify_suite(level == "full" ? bt::VerifyLevel::Full : bt::VerifyLevel::Quick, g.seed, criteria);
      if (out.doc()) {
        out.emit(bt::to_json(report));
      } else {
        out.os() << "criterion,title,check,pass,seconds,detail\n";
        for (const auto& c : report.criteria)
          for (const auto& k : c.checks)
            out.os() << c.id << ",\"" << c.title << "\",\"" << k.name << "\"," << (k.pass ? 1 : 0) << ","
                     << num(c.seconds) << ",\"" << k.detail << "\"\n";
      }
      for (const auto& c : report.criteria)
        std::cerr << "criterion " << c.id << (c.pass ? " PASS" : " FAIL") << ": " << c.title << "\n";
      return report.pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
