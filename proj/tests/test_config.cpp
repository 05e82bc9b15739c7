#include <doctest.h>

#include <string>
#include <vector>

#include "rmt/config.hpp"
#include "rmt/errors.hpp"

using namespace rmt;

namespace {

const char* kGoe = R"({"ensemble": {"family": "GOE", "n": 64},
                       "test_function": {"name": "monomial", "k": 2},
                       "replicas": 100, "seed": 7})";

std::string error_of(const std::string& text, Command cmd, std::vector<std::string> overrides = {}) {
  try {
    parse_config(text, cmd, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("subcommand names") {
  for (auto c : {Command::simulate, Command::theory, Command::laws, Command::volterra, Command::report})
    CHECK(command_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(command_from_string("fly"), ConfigError);
}

TEST_CASE("minimal simulate config") {
  const auto cfg = parse_config(kGoe, Command::simulate);
  REQUIRE(cfg.ensemble);
  CHECK(cfg.ensemble->family == Family::goe);
  CHECK(cfg.ensemble->n == 64);
  CHECK(cfg.replicas == 100);
  CHECK(cfg.seed == 7);
  CHECK(cfg.order == 128);
  CHECK(cfg.hash.size() == 16);
  const auto exp = cfg.experiment(3);
  CHECK(exp.workers == 3);
  CHECK(exp.sizes() == std::vector<int>{64});
  CHECK(cfg.resolved_json.find("\"n_grid\":[64]") != std::string::npos);
}

TEST_CASE("offending keys are named") {
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "GOE", "n": 64},
      "test_function": {"name": "monomial"}, "replicas": -5})", Command::simulate), "replicas:"));
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "GOE", "n": 64},
      "test_function": {"name": "monomial"}})", Command::simulate), "replicas:"));
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "GOE", "n": 64, "bogus": 1},
      "test_function": {"name": "monomial"}, "replicas": 5})", Command::simulate), "ensemble.bogus:"));
  CHECK(starts_with(error_of(R"({"typo": 1})", Command::laws), "typo:"));
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "Nope", "n": 4}})", Command::laws), "ensemble.family:"));
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "GOE", "n": 64},
      "test_function": {"name": "monomial", "q": 2}, "replicas": 5})", Command::simulate), "test_function:"));
  CHECK(starts_with(error_of("{not json", Command::laws), "<root>:"));
  CHECK(starts_with(error_of(kGoe, Command::simulate, {"seed=-1"}), "seed:"));
}

TEST_CASE("covariance aspect ratio") {
  const std::string wish = R"({"ensemble": {"family": "Wishart", "n": 100, "c": 0.5},
      "test_function": {"name": "monomial", "k": 1}, "replicas": 10})";
  const auto err = error_of(wish, Command::theory);
  CHECK(starts_with(err, "ensemble.c:"));
  CHECK(err.find("c >= 1") != std::string::npos);
  // Simulation with c < 1 is fine.
  const auto sim = parse_config(wish, Command::simulate);
  CHECK(sim.ensemble->m == 50);
  CHECK(starts_with(error_of(wish, Command::theory, {"ensemble.c=2", "ensemble.m=50"}), "ensemble.m:"));
  const auto ok = parse_config(wish, Command::theory, std::vector<std::string>{"ensemble.c=2"});
  CHECK(ok.ensemble->m == 200);
}

TEST_CASE("entry laws") {
  const auto cfg = parse_config(R"({"ensemble": {"family": "Wigner", "n": 50, "w2": 2,
      "entry": {"kind": "rademacher"}}, "test_function": {"name": "monomial"}})", Command::theory);
  CHECK(cfg.ensemble->offdiag_law().variance() == doctest::Approx(2.0));
  CHECK(cfg.ensemble->diag_law().variance() == doctest::Approx(4.0));
  CHECK(cfg.ensemble->kappa4() == doctest::Approx(-8.0));  // mu4 - 3 mu2^2 = 4 - 12
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "Wigner", "n": 50, "w2": 2,
      "entry": {"kind": "gaussian", "variance": 1}}, "test_function": {"name": "monomial"}})", Command::theory),
                    "ensemble.w2:"));
  CHECK(starts_with(error_of(R"({"ensemble": {"family": "SampleCovariance", "n": 50, "m": 100,
      "entry": {"kind": "table", "atoms": [[1, 0.5], [2, 0.5]]}}, "test_function": {"name": "monomial"}})",
                             Command::theory),
                    "ensemble.entry:"));
  const auto uni = parse_config(R"({"ensemble": {"family": "SampleCovariance", "n": 50, "m": 100,
      "entry": {"kind": "uniform", "halfwidth": 1}}, "test_function": {"name": "monomial"}})", Command::theory);
  CHECK(uni.ensemble->a2 == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("theory rejects complex test functions") {
  CHECK(starts_with(error_of(kGoe, Command::theory, {"test_function={\"name\":\"exponential\"}"}),
                    "test_function.name:"));
  CHECK_NOTHROW(parse_config(kGoe, Command::simulate, std::vector<std::string>{"test_function={\"name\":\"exponential\"}"}));
}

TEST_CASE("overrides and hash") {
  const auto base = parse_config(kGoe, Command::simulate);
  const auto same = parse_config(kGoe, Command::simulate, std::vector<std::string>{"seed=7"});
  CHECK(base.hash == same.hash);
  const auto spaced = parse_config(R"({"seed":7,"replicas":100,"test_function":{"k":2,"name":"monomial"},
      "ensemble":{"n":64,"family":"GOE"}})", Command::simulate);
  CHECK(spaced.hash == base.hash);
  const auto workers = parse_config(kGoe, Command::simulate, std::vector<std::string>{"workers=6"});
  CHECK(workers.hash == base.hash);
  CHECK(workers.workers == 6);
  const auto other = parse_config(kGoe, Command::simulate, std::vector<std::string>{"ensemble.n=32"});
  CHECK(other.ensemble->n == 32);
  CHECK(other.hash != base.hash);
  CHECK(parse_config(kGoe, Command::report).hash == base.hash);
  CHECK(starts_with(error_of(kGoe, Command::simulate, {"test_function.name=poisson"}), "test_function:"));
  CHECK(starts_with(error_of(kGoe, Command::simulate, {"novalue"}), "--set"));
  CHECK(starts_with(error_of(kGoe, Command::simulate, {"seed.x=1"}), "--set"));
}

TEST_CASE("laws and volterra sections") {
  const auto laws = parse_config(R"({"laws": {"law": "marchenko_pastur", "c": 2}})", Command::laws);
  REQUIRE(laws.laws);
  CHECK(laws.laws->law.kind == LimitLaw::Kind::marchenko_pastur);
  CHECK(laws.laws->points == 401);
  const auto from_ens = parse_config(R"({"ensemble": {"family": "Wishart", "n": 10, "m": 30}})", Command::laws);
  CHECK(from_ens.laws->law.c == doctest::Approx(3.0));
  CHECK(starts_with(error_of("{}", Command::laws), "laws.law:"));

  const auto vol = parse_config(R"({"test_function": {"name": "poisson"}, "volterra": {"h": 0.01, "T": 5}})",
                                Command::volterra);
  REQUIRE(vol.volterra);
  CHECK(vol.volterra->horizon == 5.0);
  CHECK(vol.volterra->w == 1.0);
  CHECK(starts_with(error_of(R"({"test_function": {"name": "poisson"}, "volterra": {"h": 0.3, "T": 1}})",
                             Command::volterra),
                    "volterra.T:"));
}
