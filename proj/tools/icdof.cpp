// Command-line front end: one verb per engine operation, JSON on stdout.
//
// Exit status: 0 on success, 2 when the input is rejected (the JSON error
// object is printed on stdout), 1 on anything else.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "icdof/icdof.hpp"

using namespace icdof;

namespace {

struct Globals {
  std::size_t budget = kDefaultAtomBudget;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

ChannelMatrix load_channel(const std::string& matrix, int generic_k) {
  if (!matrix.empty()) return channel_from_json(read_json_file(matrix));
  if (generic_k >= 2) return ChannelMatrix::generic(generic_k);
  fail(ErrorCode::invalid_argument, "give --matrix FILE or --generic K");
}

BigInt integer_arg(const std::string& text, const char* what) {
  const auto q = parse_scalar(text).as_rational();
  if (!q || !q->is_integer()) fail(ErrorCode::invalid_argument, std::string(what) + " must be an integer, got '" + text + "'");
  return q->numerator();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact degrees-of-freedom bounds for interference channels"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--budget", g.budget, "Atom budget for any materialized distribution")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: all cores)");

  std::string matrix, u_file, v_file, ifs_file, a_file, b_file, lambda_text = "-1", n_text, route_text = "auto";
  std::string objective = "hlambda";
  std::vector<std::string> w_files;
  int degree = 0, generic_k = 0, k = 0, d = 0, n = 0, m = 0, all_offdiag = 1;
  std::int64_t scale = 0;
  OptConfig opt;

  auto* condition = app.add_subcommand("condition", "Finite independence check at a degree");
  condition->add_option("--matrix", matrix, "Channel JSON file");
  condition->add_option("--generic", generic_k, "Use a fully generic K x K matrix");
  condition->add_option("--degree", degree, "Degree d")->required();

  auto* thm1 = app.add_subcommand("bound-thm1", "Certified lower bound from the W_N construction");
  thm1->add_option("--matrix", matrix, "Channel JSON file");
  thm1->add_option("--generic", generic_k, "Use a fully generic K x K matrix");
  thm1->add_option("--d", d, "Monomial degree d")->required();
  thm1->add_option("--n", n, "Coefficient range N")->required();
  thm1->add_option("--route", route_text, "auto | enumerate | factored")->capture_default_str();

  auto* floor_cmd = app.add_subcommand("bound-floor", "Closed-form non-asymptotic bound");
  floor_cmd->add_option("--k", k, "Users K")->required();
  floor_cmd->add_option("--d", d, "Degree d")->required();
  floor_cmd->add_option("--n", n_text, "N (integer, may be written like 2^1000)")->required();

  auto* integer_cmd = app.add_subcommand("bound-integer", "Irrational diagonal, integer off-diagonal example");
  integer_cmd->add_option("--matrix", matrix, "Channel JSON with integer off-diagonal entries (diagonal ignored)");
  integer_cmd->add_option("--k", k, "Users K (with --all)");
  integer_cmd->add_option("--all", all_offdiag, "Common off-diagonal value (with --k)")->capture_default_str();
  integer_cmd->add_option("--n", n, "Alphabet size N")->required();

  auto* thm3 = app.add_subcommand("ratio-thm3", "Entropy ratio for given inputs");
  thm3->add_option("--matrix", matrix, "Channel JSON file");
  thm3->add_option("--generic", generic_k, "Use a fully generic K x K matrix");
  thm3->add_option("--w", w_files, "One distribution JSON file per user")->required();

  auto* hl = app.add_subcommand("hlambda", "2 - H(U+V)/H(U+lambda V)");
  hl->add_option("--lambda", lambda_text, "Rational lambda")->capture_default_str();
  hl->add_option("--u", u_file, "Distribution JSON for U")->required();
  hl->add_option("--v", v_file, "Distribution JSON for V")->required();

  auto* optimize = app.add_subcommand("optimize", "Search input distributions");
  optimize->add_option("--objective", objective, "hlambda | thm3")->capture_default_str();
  optimize->add_option("--lambda", lambda_text, "Rational lambda (hlambda)")->capture_default_str();
  optimize->add_option("--matrix", matrix, "Channel JSON file (thm3)");
  optimize->add_option("--generic", generic_k, "Generic K x K matrix (thm3)");
  optimize->add_option("--n", n, "Support size")->required();
  optimize->add_option("--restarts", opt.restarts, "Restarts")->capture_default_str();
  optimize->add_option("--iters", opt.max_iters, "Nelder-Mead iterations per restart")->capture_default_str();
  optimize->add_option("--seed", opt.seed, "Seed")->capture_default_str();
  optimize->add_option("--max-den", opt.max_denominator, "Rationalization denominator bound")->capture_default_str();

  auto* infodim = app.add_subcommand("infodim", "Information dimension of a self-similar measure");
  infodim->add_option("--ifs", ifs_file, "IFS JSON file")->required();
  infodim->add_option("--m", m, "Truncation depth for the empirical estimate");
  infodim->add_option("--scale", scale, "Quantization scale k for the empirical estimate");

  auto* sum_cmd = app.add_subcommand("sumset", "Sumset and difference set of two finite sets");
  sum_cmd->add_option("--a", a_file, "Set JSON for A")->required();
  sum_cmd->add_option("--b", b_file, "Set JSON for B")->required();

  auto* ineq = app.add_subcommand("ineq-suite", "Sum-difference entropy inequalities");
  ineq->add_option("--u", u_file, "Distribution JSON for U")->required();
  ineq->add_option("--v", v_file, "Distribution JSON for V")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit(Json{{"code", "invalid_argument"}, {"message", e.what()}});
    return 2;
  }

  try {
    if (condition->parsed()) {
      emit(to_json(check_condition_star(load_channel(matrix, generic_k), degree)));
    } else if (thm1->parsed()) {
      EntropyRoute route = EntropyRoute::automatic;
      if (route_text == "enumerate") {
        route = EntropyRoute::enumerate;
      } else if (route_text == "factored") {
        route = EntropyRoute::factored;
      } else if (route_text != "auto") {
        fail(ErrorCode::invalid_argument, "unknown route '" + route_text + "'");
      }
      emit(to_json(theorem1_certified_bound(load_channel(matrix, generic_k), d, n, g.budget, route)));
    } else if (floor_cmd->parsed()) {
      const BigInt big_n = integer_arg(n_text, "--n");
      emit(Json{{"floor", detail::round12(nonasymptotic_floor(k, d, big_n))}, {"K", k}, {"d", d}, {"N", big_n.str()}});
    } else if (integer_cmd->parsed()) {
      std::vector<std::vector<std::int64_t>> off;
      if (!matrix.empty()) {
        const ChannelMatrix H = channel_from_json(read_json_file(matrix));
        k = H.K();
        off.assign(k, std::vector<std::int64_t>(k, 0));
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            const auto q = H(i, j).as_rational();
            if (!q || !q->is_integer()) fail(ErrorCode::invalid_argument, "off-diagonal entries must be integers");
            off[i][j] = q->numerator().convert_to<std::int64_t>();
          }
        }
      } else {
        if (k < 2) fail(ErrorCode::invalid_argument, "give --matrix FILE or --k K");
        off.assign(k, std::vector<std::int64_t>(k, all_offdiag));
      }
      emit(to_json(integer_example_bound(k, off, n, g.budget)));
    } else if (thm3->parsed()) {
      const ChannelMatrix H = load_channel(matrix, generic_k);
      std::vector<DiscreteDist> W;
      for (const std::string& f : w_files) W.push_back(dist_from_json(read_json_file(f)));
      emit(Json{{"ratio", detail::round12(theorem3_ratio(H, W, g.budget))}, {"K", H.K()}});
    } else if (hl->parsed()) {
      const Rational lambda = Rational::parse(lambda_text);
      const DiscreteDist U = dist_from_json(read_json_file(u_file));
      const DiscreteDist V = dist_from_json(read_json_file(v_file));
      emit(Json{{"bound", detail::round12(hlambda_bound(lambda, U, V, g.budget))}, {"lambda", lambda.str()}});
    } else if (optimize->parsed()) {
      opt.threads = g.threads;
      opt.budget = g.budget;
      if (objective == "hlambda") {
        const Rational lambda = Rational::parse(lambda_text);
        Json j = to_json(optimize_hlambda(lambda, n, opt), {"best_U", "best_V"});
        j["lambda"] = lambda.str();
        emit(j);
      } else if (objective == "thm3") {
        const ChannelMatrix H = load_channel(matrix, generic_k);
        std::vector<std::string> names;
        for (int i = 1; i <= H.K(); ++i) names.push_back("best_W" + std::to_string(i));
        emit(to_json(optimize_theorem3(H, n, opt), names));
      } else {
        fail(ErrorCode::invalid_argument, "unknown objective '" + objective + "'");
      }
    } else if (infodim->parsed()) {
      const IFSSpec ifs = ifs_from_json(read_json_file(ifs_file));
      Json j{{"formula", detail::round12(infodim_formula(ifs))}, {"caveat", kFormulaCaveat}};
      if (m > 0 || scale > 0) {
        if (m < 1 || scale < 2) fail(ErrorCode::invalid_argument, "the empirical estimate needs --m >= 1 and --scale >= 2");
        const InfodimEstimate e = empirical_infodim(ifs, m, scale, g.budget);
        j["empirical"] = {{"value", detail::round12(e.value)},
                          {"raw_ratio", detail::round12(e.raw_ratio)},
                          {"guard_ok", e.guard_ok},
                          {"flags", e.flags},
                          {"m", m},
                          {"scale", scale}};
      }
      emit(j);
    } else if (sum_cmd->parsed()) {
      const FiniteSet A = set_from_json(read_json_file(a_file));
      const FiniteSet B = set_from_json(read_json_file(b_file));
      const FiniteSet S = sumset(A, B, g.budget);
      const FiniteSet D = difference_set(A, B, g.budget);
      Json j{{"sumset", to_json(S)["elements"]},
             {"difference_set", to_json(D)["elements"]},
             {"sizes", {{"A", A.size()}, {"B", B.size()}, {"sum", S.size()}, {"difference", D.size()}}},
             {"trivial_bounds",
              {{"lower_ok", std::max(A.size(), B.size()) <= S.size()}, {"upper_ok", S.size() <= A.size() * B.size()}}}};
      emit(j);
    } else if (ineq->parsed()) {
      const DiscreteDist U = dist_from_json(read_json_file(u_file));
      const DiscreteDist V = dist_from_json(read_json_file(v_file));
      emit(to_json(entropy_inequality_suite(U, V, g.budget)));
    }
  } catch (const Error& e) {
    emit(error_json(e));
    std::cerr << "icdof: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "icdof: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
