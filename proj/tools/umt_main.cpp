#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "umt/umt.hpp"

namespace {

using umt::Json;

void emit(const Json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw umt::ParseError("cannot write \"" + out_path + "\"");
  f << text;
}

umt::ExtendedSpace load_space(const std::string& path) {
  return umt::space_from_json(umt::load_json_file(path));
}

std::size_t label_index(const umt::FiniteMetricSpace& s, const std::string& label) {
  auto i = s.find_label(label);
  if (!i) throw umt::NotFound("label \"" + label + "\" not in space");
  return *i;
}

constexpr std::size_t kMaxMatrixPoints = 512;

const CLI::Validator kRational(
    [](std::string& v) -> std::string {
      try {
        umt::parse_rational(v);
      } catch (const umt::Error& e) {
        return std::string(e.what());
      }
      return {};
    },
    "RATIONAL");

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultrametric geometry toolkit"};
  app.require_subcommand(1);
  app.footer(
      "environment: UMT_THREADS caps internal parallelism; all reductions are\n"
      "deterministic, so outputs never depend on it");

  auto* gen = app.add_subcommand("gen", "generate spaces and word sets");
  std::string gen_kind, gen_lambda = "1/2", gen_metric = "none", gen_out;
  std::size_t gen_n = 16, gen_depth = 3;
  std::uint64_t gen_seed = 0;
  unsigned gen_k = 2, gen_children = 4, gen_skip = 2;
  double gen_scale = 1.0;
  gen->add_option("kind", gen_kind, "ultrametric|metric|cantor")
     ->required()
     ->check(CLI::IsMember({"ultrametric", "metric", "cantor"}));
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--k", gen_k, "alphabet size");
  gen->add_option("--depth", gen_depth, "word length");
  gen->add_option("--lambda", gen_lambda, "scale ratio p/q")->check(kRational);
  gen->add_option("--scale", gen_scale, "top merge height for ultrametric sampling");
  gen->add_option("--max-children", gen_children, "dendrogram branching bound");
  gen->add_option("--max-skip", gen_skip, "max level skip along the sampled tree");
  gen->add_option("--metric", gen_metric, "materialize cantor words: none|rho|sigma")
     ->check(CLI::IsMember({"none", "rho", "sigma"}));
  gen->add_option("--out", gen_out, "output path (default stdout)");

  auto* check = app.add_subcommand("check", "measure metric properties");
  std::string check_in, check_prop, check_mode = "greedy", check_out;
  double check_tol = 1e-12;
  check->add_option("--in", check_in, "space JSON")->required();
  check->add_option("--property", check_prop, "ultrametric|doubling|perfect|disconnected|all")
       ->required()
       ->check(CLI::IsMember({"ultrametric", "doubling", "perfect", "disconnected", "all"}));
  check->add_option("--mode", check_mode, "ball cover search: exact|greedy")
       ->check(CLI::IsMember({"exact", "greedy"}));
  check->add_option("--tol", check_tol, "relative tolerance for the ultrametric test");
  check->add_option("--out", check_out, "output path (default stdout)");

  auto* deform = app.add_subcommand("deform", "metric deformations");
  std::string def_kind, def_in, def_base, def_inf_label = "inf", def_out;
  std::uint64_t def_seed = 0;
  std::size_t def_budget = 10000, def_max_n = 16;
  deform->add_option("--kind", def_kind, "chordal|invert|sphericalize|counterexample")
        ->required()
        ->check(CLI::IsMember({"chordal", "invert", "sphericalize", "counterexample"}));
  deform->add_option("--in", def_in, "space JSON");
  deform->add_option("--base", def_base, "base point label");
  deform->add_option("--inf-label", def_inf_label, "label for the added point at infinity");
  deform->add_option("--seed", def_seed, "rng seed for the counterexample search");
  deform->add_option("--budget", def_budget, "candidate spaces to examine");
  deform->add_option("--max-n", def_max_n, "largest random candidate size");
  deform->add_option("--out", def_out, "output path (default stdout)");

  auto* um = app.add_subcommand("ultrametrize", "subdominant ultrametric and merge tree");
  std::string um_in, um_out;
  double um_tol = 1e-12;
  um->add_option("--in", um_in, "space JSON")->required();
  um->add_option("--tol", um_tol, "merge-height clustering tolerance");
  um->add_option("--out", um_out, "output path (default stdout)");

  auto* embed = app.add_subcommand("embed", "word-space embeddings and the uniformization pipeline");
  std::string em_in, em_lambda = "1/2", em_mode = "exact-level", em_base, em_out;
  unsigned em_k = 2;
  bool em_unbounded = false, em_uniformize = false, em_props = false;
  bool em_force = false, em_steps = false;
  std::size_t em_max_exact = 60, em_samples = 1000000;
  std::uint64_t em_seed = 0;
  double em_tol = 1e-12;
  embed->add_option("--in", em_in, "space JSON")->required();
  embed->add_option("--k", em_k, "alphabet size");
  embed->add_option("--lambda", em_lambda, "scale ratio p/q")->check(kRational);
  embed->add_option("--mode", em_mode, "exact-level|expand-depth")
       ->check(CLI::IsMember({"exact-level", "expand-depth"}));
  embed->add_flag("--unbounded", em_unbounded, "route through the extension at --base");
  embed->add_option("--base", em_base, "base point label");
  embed->add_flag("--uniformize", em_uniformize,
                  "full pipeline: subdominant ultrametric first, then k=2 expand-depth");
  embed->add_flag("--props", em_props, "attach an input property report");
  embed->add_option("--tol", em_tol, "merge-height clustering tolerance");
  embed->add_option("--max-exact-n", em_max_exact, "largest n scanned exhaustively");
  embed->add_flag("--force", em_force, "allow sampled quadruple scans past the exact cap");
  embed->add_option("--samples", em_samples, "sampled quadruples when forced");
  embed->add_option("--seed", em_seed, "sampling seed");
  embed->add_flag("--steps", em_steps, "record per-triple quasisymmetry step data");
  embed->add_option("--out", em_out, "output path (default stdout)");

  auto* dis = app.add_subcommand("distort", "distortion constants of a point map");
  std::string di_map, di_kind = "all", di_out;
  double di_tol = 1e-9;
  bool di_force = false, di_steps = false;
  std::size_t di_max_exact = 60, di_samples = 1000000;
  std::uint64_t di_seed = 0;
  dis->add_option("--map", di_map, "map JSON (source, target, label assignment)")->required();
  dis->add_option("--kind", di_kind, "bilip|qs|qm|mobius|all")
     ->check(CLI::IsMember({"bilip", "qs", "qm", "mobius", "all"}));
  dis->add_option("--tol", di_tol, "relative tolerance for the cross-ratio test");
  dis->add_option("--max-exact-n", di_max_exact, "largest n scanned exhaustively");
  dis->add_flag("--force", di_force, "allow sampled quadruple scans past the exact cap");
  dis->add_option("--samples", di_samples, "sampled quadruples when forced");
  dis->add_option("--seed", di_seed, "sampling seed");
  dis->add_flag("--steps", di_steps, "record per-triple quasisymmetry step data");
  dis->add_option("--out", di_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      umt::SeededRng rng(gen_seed);
      if (gen_kind == "ultrametric") {
        if (gen_n > kMaxMatrixPoints)
          throw umt::SizeLimitExceeded("distance matrices cap at 512 points");
        umt::UltrametricGenOptions o;
        o.max_children = gen_children;
        o.max_level_skip = gen_skip;
        o.lambda = umt::rational_to_double(umt::parse_rational(gen_lambda));
        o.scale = gen_scale;
        emit(umt::space_to_json(umt::random_ultrametric(gen_n, rng, o)), gen_out);
      } else if (gen_kind == "metric") {
        if (gen_n > kMaxMatrixPoints)
          throw umt::SizeLimitExceeded("distance matrices cap at 512 points");
        emit(umt::space_to_json(umt::random_euclidean(gen_n, rng)), gen_out);
      } else {
        umt::CantorSpace cs{gen_k, umt::parse_rational(gen_lambda), gen_depth,
                            umt::enumerate_words(gen_k, gen_depth), umt::zero_word(gen_depth)};
        if (gen_metric == "none") {
          emit(umt::cantor_to_json(cs), gen_out);
        } else {
          if (gen_metric == "sigma") cs.points.erase(cs.points.begin());  // drop the base word
          if (cs.points.size() > kMaxMatrixPoints)
            throw umt::SizeLimitExceeded("distance matrices cap at 512 points");
          auto metric = gen_metric == "rho" ? umt::CantorMetric::Rho : umt::CantorMetric::Sigma;
          emit(umt::space_to_json(umt::materialize(cs, metric)), gen_out);
        }
      }
      return 0;
    }

    if (check->parsed()) {
      auto s = load_space(check_in).space;
      auto mode = check_mode == "exact" ? umt::CoverMode::Exact : umt::CoverMode::Greedy;
      Json out;
      if (check_prop == "ultrametric")
        out = umt::ultrametric_to_json(umt::check_ultrametric(s, check_tol));
      else if (check_prop == "doubling")
        out = umt::doubling_to_json(umt::doubling_constant(s, mode));
      else if (check_prop == "perfect")
        out = umt::perfectness_to_json(umt::uniform_perfectness_constant(s));
      else if (check_prop == "disconnected")
        out = umt::chain_to_json(umt::disconnectedness_modulus(s));
      else
        out = umt::report_to_json(umt::full_report(s, mode, check_tol));
      emit(out, check_out);
      return 0;
    }

    if (deform->parsed()) {
      if (def_kind == "counterexample") {
        emit(umt::counterexample_to_json(
                 umt::find_sphericalization_counterexample(def_max_n, def_seed, def_budget)),
             def_out);
        return 0;
      }
      if (def_in.empty()) throw umt::InvalidParams("--in is required for this kind");
      if (def_base.empty()) throw umt::InvalidParams("--base is required for this kind");
      auto s = load_space(def_in).space;
      std::size_t b = label_index(s, def_base);
      if (def_kind == "chordal")
        emit(umt::space_to_json(umt::chordal_extend(s, b, def_inf_label)), def_out);
      else if (def_kind == "invert")
        emit(umt::space_to_json(umt::invert(s, b)), def_out);
      else
        emit(umt::space_to_json(umt::sphericalize(s, b)), def_out);
      return 0;
    }

    if (um->parsed()) {
      auto s = load_space(um_in).space;
      s.require_metric();
      auto sub = umt::subdominant_ultrametric(s);
      Json out;
      out["space"] = umt::space_to_json(sub);
      out["dendrogram"] = umt::dendrogram_to_json(umt::build_dendrogram(sub, um_tol));
      auto dv = umt::ultrametrization_distortion(s);
      out["distortion"] = Json{{"value", dv.value}, {"a", dv.a}, {"b", dv.b}};
      emit(out, um_out);
      return 0;
    }

    if (embed->parsed()) {
      auto s = load_space(em_in).space;
      auto lam = umt::parse_rational(em_lambda);
      umt::EmbedOptions opts;
      opts.mode = em_mode == "exact-level" ? umt::EmbedMode::ExactLevel
                                           : umt::EmbedMode::ExpandDepth;
      opts.input_properties = em_props;
      opts.tol = em_tol;
      opts.scan.max_exact_n = em_max_exact;
      opts.scan.force = em_force;
      opts.scan.sample_quads = em_samples;
      opts.scan.seed = em_seed;
      opts.scan.collect_steps = em_steps;
      std::optional<std::size_t> base;
      if (!em_base.empty()) base = label_index(s, em_base);
      auto result = [&]() -> umt::EmbeddingResult {
        if (em_uniformize) {
          auto mode = em_unbounded ? umt::UniformizeMode::Unbounded : umt::UniformizeMode::Bounded;
          return umt::uniformize(s, mode, base, lam, opts);
        }
        if (em_unbounded) {
          if (!base) throw umt::InvalidParams("--base is required with --unbounded");
          return umt::embed_unbounded(s, *base, em_k, lam, opts);
        }
        return umt::embed_compact(s, em_k, lam, opts);
      }();
      emit(umt::embedding_to_json(result), em_out);
      return 0;
    }

    if (dis->parsed()) {
      auto j = umt::load_json_file(di_map);
      auto base_dir = std::filesystem::path(di_map).parent_path().string();
      auto m = umt::map_from_json(j, base_dir);
      umt::ScanOptions opts;
      opts.max_exact_n = di_max_exact;
      opts.force = di_force;
      opts.sample_quads = di_samples;
      opts.seed = di_seed;
      opts.collect_steps = di_steps;
      Json out;
      if (di_kind == "bilip")
        out = umt::bilip_to_json(umt::bilipschitz_of_map(m));
      else if (di_kind == "qs")
        out = umt::qs_to_json(umt::weak_qs_constant(m, opts));
      else if (di_kind == "qm")
        out = umt::qm_to_json(umt::weak_qm_constant(m, opts));
      else if (di_kind == "mobius")
        out = umt::mobius_to_json(umt::is_mobius(m, di_tol, opts));
      else
        out = umt::distortion_to_json(umt::full_distortion(m, di_tol, opts));
      emit(out, di_out);
      return 0;
    }
  } catch (const umt::Error& e) {
    std::cout << umt::error_to_json(e).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", "Internal"}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  }
  return 0;
}
