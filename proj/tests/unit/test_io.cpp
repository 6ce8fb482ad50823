#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "lfc/archive.hpp"
#include "lfc/config.hpp"
#include "lfc/error.hpp"
#include "lfc/fixture.hpp"
#include "lfc/io_format.hpp"
#include "lfc/trace_io.hpp"

using namespace lfc;

TEST_CASE("config round-trip is the identity") {
  for (const std::string& v : benchmark_variants()) {
    const std::string once = serialize_config(benchmark_variant(v));
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
  }
}

TEST_CASE("strict parsing names the offending field") {
  const std::string good = serialize_config(benchmark_config());
  std::string unknown = good;
  unknown.insert(1, "\"colour\": 3, ");
  CHECK_THROWS_WITH_AS(parse_config(unknown), doctest::Contains("colour"), ValidationError);

  ExperimentConfig cfg = benchmark_config();
  cfg.plant.b = 0.0;
  CHECK_THROWS_AS(build_experiment(parse_config(serialize_config(cfg))), ValidationError);
  CHECK_THROWS_AS(parse_config("{ not json"), ValidationError);
  CHECK_THROWS_AS(parse_config("{}"), ValidationError);

  cfg = benchmark_config();
  cfg.topology.pinning = {0, 0, 0, 0};
  CHECK_THROWS_AS(build_experiment(cfg), ValidationError);
}

TEST_CASE("doubles are written in shortest round-trip form") {
  Rng rng(41);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("certificate archive round-trips bit-exactly") {
  Rng rng(42);
  Certificate c;
  c.P = test::random_spd(rng, 4);
  for (int k = 0; k < 2; ++k) {
    c.Q.push_back(test::random_spd(rng, 4));
    c.R.push_back(test::random_spd(rng, 4));
  }
  c.Qbar.push_back(test::random_spd(rng, 4));
  c.Rbar.push_back(test::random_spd(rng, 4));
  const DelayBounds b{0.0123456789, 0.5, 0.75};
  LmiOptions lmi;
  lmi.third = ThirdLmi::pin_family;

  std::stringstream io;
  write_archive(io, certificate_archive(c, b, lmi));
  const ArchivedCertificate back = certificate_from_archive(read_archive(io));
  CHECK(back.certificate.P == c.P);
  CHECK(back.certificate.Q == c.Q);
  CHECK(back.certificate.Qbar == c.Qbar);
  CHECK(back.certificate.R == c.R);
  CHECK(back.certificate.Rbar == c.Rbar);
  CHECK(back.bounds.tau == b.tau);
  CHECK(back.bounds.d_follower == b.d_follower);
  CHECK(back.lmi.third == ThirdLmi::pin_family);

  std::stringstream broken("lfc-matrix-archive 1\nmatrix P 2 2\n1 2\n");
  CHECK_THROWS_AS(read_archive(broken), ValidationError);
}

TEST_CASE("re-running a configuration reproduces the CSV byte for byte") {
  ExperimentConfig cfg = benchmark_variant("smoothed");
  cfg.integrator.horizon = 1.0;
  auto render = [](const ExperimentConfig& c) {
    const Experiment ex = build_experiment(c);
    const DelayProfiles p = make_profiles(ex);
    std::ostringstream out;
    write_trace_csv(out, simulate(ex, p));
    write_profiles_csv(out, p);
    return out.str();
  };
  const std::string first = render(cfg);
  CHECK(first == render(parse_config(serialize_config(cfg))));
  CHECK(first.rfind("t,x1_1,", 0) == 0);
}
