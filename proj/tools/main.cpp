#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "twofusion/cache.hpp"
#include "twofusion/classical.hpp"
#include "twofusion/fusion.hpp"
#include "twofusion/manifest.hpp"

using namespace twofusion;

namespace {

std::string default_cache_dir() {
  const char *env = std::getenv("TWOFUSION_CACHE");
  return env ? env : "";
}

cli::Tier parse_tier_flag(const std::string &t) {
  if (t == "fast") return cli::Tier::Fast;
  if (t == "standard") return cli::Tier::Standard;
  if (t == "long") return cli::Tier::Long;
  throw CLI::ValidationError("--tier must be fast, standard or long");
}

int cmd_verify_run(const std::string &manifest, const std::string &tier,
                   int workers, const std::string &cache_dir,
                   const std::string &json_out) {
  std::vector<cli::CheckSpec> checks;
  try {
    checks = cli::parse_manifest(manifest);
  } catch (const cli::ManifestError &e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 2;
  }
  cli::SuiteReport report =
      cli::run_suite(checks, parse_tier_flag(tier), workers, cache_dir, manifest);
  for (const auto &r : report.results) {
    std::cout << "[" << cli::status_name(r.status) << "] " << r.id;
    if (r.status == cli::CheckStatus::Fail ||
        r.status == cli::CheckStatus::Indeterminate)
      std::cout << "  measured: " << r.measured << "  expected: " << r.expected;
    std::cout << "\n";
  }
  std::cout << report.passed << " passed, " << report.failed << " failed, "
            << report.indeterminate << " indeterminate, " << report.skipped
            << " skipped\n";
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << cli::report_to_json(report) << "\n";
  }
  return (report.failed || report.indeterminate) ? 1 : 0;
}

int cmd_verify_list(const std::string &manifest) {
  std::vector<cli::CheckSpec> checks;
  try {
    checks = cli::parse_manifest(manifest);
  } catch (const cli::ManifestError &e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 2;
  }
  for (const auto &row : cli::list_checks(checks))
    std::cout << row.id << "\t" << row.anchor << "\t" << row.tier << "\n";
  return 0;
}

int cmd_verify_lint(const std::string &manifest, const std::string &claims) {
  std::vector<cli::CheckSpec> checks;
  try {
    checks = cli::parse_manifest(manifest);
  } catch (const cli::ManifestError &e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 2;
  }
  auto problems = cli::lint_manifest(checks, claims);
  for (const auto &p : problems) std::cerr << "lint: " << p << "\n";
  if (problems.empty()) std::cout << "lint: ok (" << checks.size() << " checks)\n";
  return problems.empty() ? 0 : 1;
}

int cmd_group_info(const std::string &spec_text, const std::string &cache_dir) {
  classical::GroupSpec spec = classical::GroupSpec::parse(spec_text);
  std::cout << "descriptor: " << spec.str() << "\n";
  std::cout << "order: " << classical::spec_order(spec) << "\n";
  bool rebuilt = false;
  if (classical::spec_order(spec) <= 10000000ull) {
    grp::GroupPtr g = cache::load_or_build(spec.str(), cache_dir, &rebuilt);
    std::cout << "enumerated: " << g->order()
              << (cache_dir.empty() ? "" : rebuilt ? " (cache rebuilt)" : " (cache hit)")
              << "\n";
  }
  grp::Subgroup s = classical::sylow2(spec);
  grp::TwoGroupType rec = grp::recognize_2group(s);
  std::cout << "sylow 2-subgroup: order " << s.order() << ", " << rec.tag();
  if (rec.family == grp::TwoGroupFamily::Wreathed)
    std::cout << " (k=" << rec.parameter << ")";
  std::cout << "\n";
  return 0;
}

int cmd_fusion_compare(const std::string &a, const std::string &b,
                       const std::string &cache_dir, const std::string &json_out) {
  grp::GroupPtr ga = cache::load_or_build(a, cache_dir);
  grp::GroupPtr gb = cache::load_or_build(b, cache_dir);
  fusion::FusionPtr fa = fusion::build_fusion(ga);
  fusion::FusionPtr fb = fusion::build_fusion(gb);
  auto iso = fusion::is_isomorphic(*fa, *fb);
  switch (iso.result) {
    case fusion::IsoResult::Yes: {
      if (!fusion::verify_certificate(*fa, *fb, *iso.certificate)) {
        std::cout << "error: certificate failed re-verification\n";
        return 1;
      }
      std::cout << "isomorphic: the 2-fusion systems of " << a << " and " << b
                << " are isomorphic (" << iso.certificate->verified_pairs
                << " subgroup pairs verified)\n";
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << fusion::certificate_to_json(*fa, *fb, *iso.certificate) << "\n";
        std::cout << "certificate written to " << json_out << "\n";
      }
      return 0;
    }
    case fusion::IsoResult::No:
      std::cout << "distinct: " << iso.reason << "\n";
      return 0;
    default:
      std::cout << "indeterminate: " << iso.reason << "\n";
      return 1;
  }
}

int cmd_fusion_verify(const std::string &a, const std::string &b,
                      const std::string &cache_dir, const std::string &cert_path) {
  grp::GroupPtr ga = cache::load_or_build(a, cache_dir);
  grp::GroupPtr gb = cache::load_or_build(b, cache_dir);
  fusion::FusionPtr fa = fusion::build_fusion(ga);
  fusion::FusionPtr fb = fusion::build_fusion(gb);
  std::ifstream in(cert_path);
  if (!in) {
    std::cerr << "cannot open certificate " << cert_path << "\n";
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  fusion::IsoCertificate cert = fusion::certificate_from_json(*fa, text);
  bool ok = fusion::verify_certificate(*fa, *fb, cert);
  std::cout << (ok ? "certificate verifies" : "certificate FAILS") << "\n";
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"2-fusion systems of finite classical and permutation groups"};
  app.require_subcommand(1);

  std::string cache_dir = default_cache_dir();

  auto *verify = app.add_subcommand("verify", "manifest-driven verification");
  verify->require_subcommand(1);
  std::string manifest, tier = "standard", json_out, claims;
  int workers = 1;
  auto *run = verify->add_subcommand("run", "execute a manifest");
  run->add_option("--manifest", manifest)->required();
  run->add_option("--tier", tier)->check(CLI::IsMember({"fast", "standard", "long"}));
  run->add_option("--workers", workers)->check(CLI::PositiveNumber);
  run->add_option("--cache", cache_dir);
  run->add_option("--json", json_out);
  auto *list = verify->add_subcommand("list", "list checks");
  list->add_option("--manifest", manifest)->required();
  auto *lint = verify->add_subcommand("lint", "check anchors against the claims register");
  lint->add_option("--manifest", manifest)->required();
  lint->add_option("--claims", claims)->required();

  auto *group = app.add_subcommand("group", "group handles");
  group->require_subcommand(1);
  std::string spec_text;
  auto *info = group->add_subcommand("info", "order and Sylow structure");
  info->add_option("--spec", spec_text)->required();
  info->add_option("--cache", cache_dir);

  auto *fus = app.add_subcommand("fusion", "fusion-system comparison");
  fus->require_subcommand(1);
  std::string a, b, cert_path;
  auto *compare = fus->add_subcommand("compare", "decide fusion-system isomorphism");
  compare->add_option("--a", a)->required();
  compare->add_option("--b", b)->required();
  compare->add_option("--cache", cache_dir);
  compare->add_option("--json", json_out);
  auto *fverify = fus->add_subcommand("verify", "re-verify a stored certificate");
  fverify->add_option("--a", a)->required();
  fverify->add_option("--b", b)->required();
  fverify->add_option("--cert", cert_path)->required();
  fverify->add_option("--cache", cache_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_verify_run(manifest, tier, workers, cache_dir, json_out);
    if (list->parsed()) return cmd_verify_list(manifest);
    if (lint->parsed()) return cmd_verify_lint(manifest, claims);
    if (info->parsed()) return cmd_group_info(spec_text, cache_dir);
    if (compare->parsed()) return cmd_fusion_compare(a, b, cache_dir, json_out);
    if (fverify->parsed()) return cmd_fusion_verify(a, b, cache_dir, cert_path);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
