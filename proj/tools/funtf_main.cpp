#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "funtf/connect.hpp"
#include "funtf/io.hpp"
#include "funtf/motions.hpp"

namespace {

using namespace funtf;

int exit_verdict(bool pass) { return pass ? 0 : 1; }

void print_report(const PathReport& rep) {
  std::printf("samples          %zu\n", rep.rows.size());
  std::printf("max funtf resid  %.3e\n", rep.max_funtf_residual);
  std::printf("min od margin    %.3e\n", rep.min_od_margin);
  std::printf("max lift eig dev %.3e\n", rep.max_lift_eig_dev);
  std::printf("endpoint devs    %.3e / %.3e\n", rep.endpoint_dev_start, rep.endpoint_dev_end);
  if (!rep.permutation_note.empty()) std::printf("%s\n", rep.permutation_note.c_str());
  std::printf("verdict          %s\n", rep.pass ? "pass" : "FAIL");
}

FieldTag parse_field(const std::string& s) {
  if (s == "real") return FieldTag::Real;
  if (s == "complex") return FieldTag::Complex;
  raise(Err::FileFormat, "--field must be real or complex");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funtf: eigensteps, frame paths, and structure checks for unit norm tight frames"};
  app.require_subcommand(1);

  std::string input, second_input, target, output;
  std::string field_s = "complex";
  std::string base_kind = "random";
  double tol = 1e-8, eps = 1e-8, tol_rank = 1e-8, delta = 1e-3;
  int steps = 64, n_arg = 0, d_arg = 0, trials = 100, idx_i = 0, idx_j = 0;
  int chaperone = -1;
  std::uint64_t seed = 0;

  auto* c_verify = app.add_subcommand("verify", "check a frame for FUNTF status");
  c_verify->add_option("--input", input)->required();
  c_verify->add_option("--tol", tol);

  auto* c_eig = app.add_subcommand("eigensteps", "eigensteps table of a frame");
  c_eig->add_option("--input", input)->required();
  c_eig->add_option("--output", output);

  auto* c_synth = app.add_subcommand("synthesize", "frame from an eigensteps table");
  c_synth->add_option("--input", input)->required();
  c_synth->add_option("--base", base_kind)->check(CLI::IsMember({"random", "identity"}));
  c_synth->add_option("--seed", seed);
  c_synth->add_option("--field", field_s);
  c_synth->add_option("--output", output);

  auto* c_lift = app.add_subcommand("lift", "lift the linear eigensteps path from a frame");
  c_lift->add_option("--input", input)->required();
  c_lift->add_option("--target", target)->required();
  c_lift->add_option("--steps", steps);
  c_lift->add_option("--tol", tol);
  c_lift->add_option("--output", output);

  auto* c_connect = app.add_subcommand("connect", "path between two complex FUNTFs");
  c_connect->add_option("F", input)->required();
  c_connect->add_option("G", second_input)->required();
  c_connect->add_option("--tol", tol);
  c_connect->add_option("--steps", steps);
  c_connect->add_option("--seed", seed);
  c_connect->add_option("--output", output);

  auto* c_connect_nod = app.add_subcommand("connect-nod", "NOD-preserving path between NOD FUNTFs");
  c_connect_nod->add_option("F", input)->required();
  c_connect_nod->add_option("G", second_input)->required();
  c_connect_nod->add_option("--tol", tol);
  c_connect_nod->add_option("--steps", steps);
  c_connect_nod->add_option("--seed", seed);
  c_connect_nod->add_option("--output", output);

  auto* c_naimark = app.add_subcommand("naimark", "Naimark complement of a FUNTF");
  c_naimark->add_option("--input", input)->required();
  c_naimark->add_option("--output", output);

  auto* c_spark = app.add_subcommand("spark", "smallest dependent subset");
  c_spark->add_option("--input", input)->required();
  c_spark->add_option("--tol-rank", tol_rank);

  auto* c_od = app.add_subcommand("od", "orthodecomposability and OD margin");
  c_od->add_option("--input", input)->required();
  c_od->add_option("--eps", eps);

  auto* c_sample = app.add_subcommand("sample", "random interior eigensteps table");
  c_sample->add_option("--N", n_arg)->required();
  c_sample->add_option("--d", d_arg)->required();
  c_sample->add_option("--seed", seed);
  c_sample->add_option("--output", output);

  auto* c_morph = app.add_subcommand("morph", "simplex to two-ONB morph sweep");
  c_morph->add_option("--d", d_arg)->required();
  c_morph->add_option("--steps", steps);
  c_morph->add_option("--tol", tol);
  c_morph->add_option("--output", output);

  auto* c_swap = app.add_subcommand("swap", "continuous column swap paths");
  c_swap->add_option("--d", d_arg);
  c_swap->add_option("--input", input);
  c_swap->add_option("--i", idx_i);
  c_swap->add_option("--j", idx_j);
  c_swap->add_option("--chaperone", chaperone);
  c_swap->add_option("--steps", steps);
  c_swap->add_option("--tol", tol);
  c_swap->add_option("--output", output);

  auto* c_perturb = app.add_subcommand("od-perturb", "continuous escape from an OD frame");
  c_perturb->add_option("--input", input)->required();
  c_perturb->add_option("--delta", delta);
  c_perturb->add_option("--output", output);

  auto* c_exp = app.add_subcommand("experiment-fullspark", "full-spark ratio of random FUNTFs");
  c_exp->add_option("--N", n_arg)->required();
  c_exp->add_option("--d", d_arg)->required();
  c_exp->add_option("--trials", trials);
  c_exp->add_option("--seed", seed);
  c_exp->add_option("--field", field_s);
  c_exp->add_option("--tol-rank", tol_rank);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_verify->parsed()) {
      const Frame f = load_frame(input);
      const FuntfReport rep = check_funtf(f, tol);
      std::printf("unit_norm_resid %.3e\ntightness_resid %.3e\nok %s\n", rep.unit_norm_resid,
                  rep.tightness_resid, rep.ok ? "true" : "false");
      return exit_verdict(rep.ok);
    }
    if (c_eig->parsed()) {
      const EigenstepsTable t = of_frame(load_frame(input));
      std::fputs(table_to_csv(t).c_str(), stdout);
      if (!output.empty()) {
        if (ends_with(output, ".csv")) {
          std::ofstream(output) << table_to_csv(t);
        } else {
          save_table(t, output);
        }
      }
      return 0;
    }
    if (c_synth->parsed()) {
      const EigenstepsTable t = load_table(input);
      const FieldTag field = parse_field(field_s);
      Rng rng(seed);
      const BaseData base = base_kind == "identity" ? identity_base_data(t, field)
                                                    : random_base_data(t, field, rng);
      Frame f = synthesize(t, base);
      if (field == FieldTag::Complex && f.field() == FieldTag::Real)
        f = Frame(f.matrix(), FieldTag::Complex);  // real-valued base, complex tag requested
      if (!output.empty()) save_frame(f, output);
      const FuntfReport rep = check_funtf(f, 1e-7);
      std::printf("synthesized %dx%d frame, funtf resid %.3e\n", f.d(), f.N(),
                  std::max(rep.unit_norm_resid, rep.tightness_resid));
      return exit_verdict(rep.ok);
    }
    if (c_lift->parsed()) {
      const Frame f = load_frame(input);
      const EigenstepsTable t = load_table(target);
      const FramePath path = lift_path(f, t, steps);
      if (!output.empty()) save_path_csv(path, output);
      const double resid = path.max_funtf_residual();
      std::printf("lift samples %zu, max funtf resid %.3e\n", path.samples.size(), resid);
      return exit_verdict(resid <= std::max(tol, 1e-7));
    }
    if (c_connect->parsed() || c_connect_nod->parsed()) {
      RunConfig cfg;
      cfg.tol = tol;
      cfg.steps = steps;
      cfg.seed = seed;
      const Frame f = load_frame(input);
      const Frame g = load_frame(second_input);
      const ConnectResult res =
          c_connect->parsed() ? connect_frames(f, g, cfg) : connect_frames_nod(f, g, cfg);
      if (!output.empty()) save_path_csv(res.path, output);
      print_report(res.report);
      return exit_verdict(res.report.pass);
    }
    if (c_naimark->parsed()) {
      const Frame g = naimark_complement(load_frame(input));
      if (!output.empty()) save_frame(g, output);
      std::printf("complement: %d vectors in dimension %d\n", g.N(), g.d());
      return 0;
    }
    if (c_spark->parsed()) {
      const SparkReport rep = spark(load_frame(input), tol_rank);
      std::printf("spark %d\nfull_spark %s\nwitness", rep.spark, rep.full_spark ? "true" : "false");
      for (int v : rep.witness) std::printf(" %d", v);
      std::printf("\n");
      return 0;
    }
    if (c_od->parsed()) {
      const Frame f = load_frame(input);
      std::printf("od %s\nod_margin %.6e\n", is_od(f, eps) ? "true" : "false", od_margin(f));
      return 0;
    }
    if (c_sample->parsed()) {
      Rng rng(seed);
      const EigenstepsTable t = sample_interior(n_arg, d_arg, rng);
      std::fputs(table_to_csv(t).c_str(), stdout);
      if (!output.empty()) save_table(t, output);
      return 0;
    }
    if (c_morph->parsed()) {
      const FramePath path = simplex_onb_morph_path(d_arg, steps);
      if (!output.empty()) save_path_csv(path, output);
      const double resid = path.max_funtf_residual();
      const double margin = path.min_od_margin();
      std::printf("morph samples %zu, max funtf resid %.3e, min od margin %.3e\n",
                  path.samples.size(), resid, margin);
      return exit_verdict(resid <= std::max(tol, 1e-8) && margin > 0.0);
    }
    if (c_swap->parsed()) {
      FramePath path;
      if (!input.empty()) {
        const Frame f = load_frame(input);
        path = swap_pair_path(f, idx_i, idx_j,
                              chaperone >= 0 ? std::optional<int>(chaperone) : std::nullopt,
                              steps);
      } else {
        if (d_arg < 3) raise(Err::FileFormat, "swap: need --input or --d >= 3");
        path = two_onb_swap_path(d_arg, steps);
      }
      if (!output.empty()) save_path_csv(path, output);
      const double resid = path.max_funtf_residual();
      std::printf("swap samples %zu, max funtf resid %.3e, min od margin %.3e\n",
                  path.samples.size(), resid, path.min_od_margin());
      return exit_verdict(resid <= std::max(tol, 1e-7));
    }
    if (c_perturb->parsed()) {
      const Frame f = od_perturb(load_frame(input), delta);
      if (!output.empty()) save_frame(f, output);
      std::printf("perturbed frame is %s\n", is_od(f) ? "still OD" : "NOD");
      return exit_verdict(delta == 0.0 || !is_od(f));
    }
    if (c_exp->parsed()) {
      const FullSparkSummary sum =
          experiment_fullspark(n_arg, d_arg, trials, parse_field(field_s), seed, tol_rank);
      std::printf("trials %d\nfull_spark %d\nratio %.6f\n", sum.trials, sum.full_spark_count,
                  sum.ratio);
      return exit_verdict(sum.full_spark_count == sum.trials);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", err_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
