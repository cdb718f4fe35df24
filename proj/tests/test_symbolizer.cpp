#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "edwsax/symbolizer.hpp"
#include "support/random.hpp"

using edwsax::BandwidthRule;
using edwsax::Breakpoints;
using edwsax::Centroids;
using edwsax::DensityModel;
using edwsax::EstimateOn;
using edwsax::Kernel;
using edwsax::KernelKind;
using edwsax::PaaSeries;
using edwsax::SymbolizerModel;
using edwsax::SymbolWord;
using edwsax::TimeSeries;
using edwsax::TrainConfig;
using edwsax::TrainingInfo;

namespace {

SymbolizerModel tiny_kde_model() {
  TrainingInfo info;
  info.kernel = Kernel{KernelKind::epanechnikov};
  info.bandwidth_rule = BandwidthRule::fixed(0.5);
  info.bandwidth = 0.5;
  info.sample_count = 7;
  return SymbolizerModel(SymbolizerModel::Kind::kde, Breakpoints({-0.5, 0.5}),
                         Centroids({-1.0, -0.0, 1.25}), info);
}

}  // namespace

TEST_CASE("gaussian reference breakpoints hit the normal quantiles") {
  const Breakpoints b3 = edwsax::gaussian_breakpoints(3);
  REQUIRE(b3.alphabet_size() == 3);
  CHECK(b3.interior()[0] == Catch::Approx(-0.4307272992954576).epsilon(1e-12));
  CHECK(b3.interior()[1] == Catch::Approx(0.4307272992954576).epsilon(1e-12));

  const Breakpoints b4 = edwsax::gaussian_breakpoints(4);
  CHECK(b4.interior()[0] == Catch::Approx(-0.674489750196082).epsilon(1e-12));
  CHECK(b4.interior()[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK(b4.interior()[2] == Catch::Approx(0.674489750196082).epsilon(1e-12));
}

TEST_CASE("gaussian reference centroids are the bin median quantiles") {
  const Centroids c4 = edwsax::gaussian_centroids(4);
  REQUIRE(c4.alphabet_size() == 4);
  CHECK(c4[0] == Catch::Approx(-1.1503493803760083).epsilon(1e-12));
  CHECK(c4[1] == Catch::Approx(-0.3186393639643751).epsilon(1e-12));
  CHECK(c4[2] == Catch::Approx(0.3186393639643751).epsilon(1e-12));
  CHECK(c4[3] == Catch::Approx(1.1503493803760083).epsilon(1e-12));
}

TEST_CASE("breakpoints cut the fitted density into equal mass bins") {
  std::mt19937_64 rng(41);
  std::vector<double> xs = testrng::bimodal_sample(rng, 1000, 2.5, 0.9);
  const DensityModel density = edwsax::fit_density(
      xs, Kernel{KernelKind::epanechnikov}, BandwidthRule::silverman());
  const int a = 8;
  const Breakpoints b = edwsax::compute_breakpoints(density, a);
  REQUIRE(b.alphabet_size() == a);
  for (int i = 1; i < a; ++i) {
    CAPTURE(i);
    CHECK(density.cdf(b.interior()[static_cast<std::size_t>(i) - 1]) ==
          Catch::Approx(static_cast<double>(i) / a).margin(2e-8));
  }
}

TEST_CASE("centroids are the conditional medians of their bins") {
  std::mt19937_64 rng(42);
  std::vector<double> xs = testrng::bimodal_sample(rng, 800, 3.0, 1.0);
  const DensityModel density = edwsax::fit_density(
      xs, Kernel{KernelKind::biweight}, BandwidthRule::silverman());
  const int a = 6;
  const Breakpoints b = edwsax::compute_breakpoints(density, a);
  const Centroids c = edwsax::compute_centroids(density, b);
  REQUIRE(c.alphabet_size() == a);
  for (int i = 0; i < a; ++i) {
    CAPTURE(i);
    CHECK(density.cdf(c[i]) ==
          Catch::Approx((static_cast<double>(i) + 0.5) / a).margin(2e-8));
    // The median of a bin lies inside that bin.
    CHECK(b.symbol_of(c[i]) == i);
  }
}

TEST_CASE("quantile inversion resolves zero density plateaus at the midpoint") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < 500; ++i) xs[i] = 0.0;
  for (std::size_t i = 500; i < 1000; ++i) xs[i] = 10.0;
  const DensityModel density(xs, Kernel{KernelKind::epanechnikov}, 0.5);
  // The cdf sits at exactly 0.5 across the whole gap between the spikes;
  // the cut must land deterministically in the middle of that plateau.
  const Breakpoints b1 = edwsax::compute_breakpoints(density, 2);
  const Breakpoints b2 = edwsax::compute_breakpoints(density, 2);
  CHECK(b1.interior()[0] == Catch::Approx(5.0).margin(0.05));
  CHECK(b1.interior()[0] == b2.interior()[0]);
}

TEST_CASE("train pools every normalized training point") {
  std::mt19937_64 rng(7);
  std::vector<TimeSeries> series;
  series.push_back(testrng::normal_series(rng, 64));
  series.push_back(testrng::normal_series(rng, 100));
  TrainConfig cfg;
  cfg.alphabet_size = 6;
  cfg.bandwidth = BandwidthRule::silverman();
  const SymbolizerModel model = edwsax::train(series, cfg);
  CHECK(model.kind() == SymbolizerModel::Kind::kde);
  CHECK(model.alphabet_size() == 6);
  CHECK(model.info().sample_count == 164);
  CHECK(std::isfinite(model.info().bandwidth));
  CHECK(model.density().has_value());
  // Breakpoints bracket the normalized data range.
  CHECK(model.breakpoints().interior().front() > -4.0);
  CHECK(model.breakpoints().interior().back() < 4.0);
}

TEST_CASE("estimating on paa segments changes the pooled sample") {
  std::mt19937_64 rng(70);
  std::vector<TimeSeries> series;
  for (int i = 0; i < 4; ++i) series.push_back(testrng::bimodal_series(rng, 64));
  const std::vector<double> raw_pool = edwsax::pool_training_points(
      series, EstimateOn::raw, edwsax::WordPolicy::segment_size(2));
  const std::vector<double> paa_pool = edwsax::pool_training_points(
      series, EstimateOn::paa, edwsax::WordPolicy::segment_size(2));
  CHECK(raw_pool.size() == 256);
  CHECK(paa_pool.size() == 128);

  TrainConfig cfg;
  cfg.bandwidth = BandwidthRule::silverman();
  TrainConfig cfg_paa = cfg;
  cfg_paa.estimate_on = EstimateOn::paa;
  const SymbolizerModel raw_model = edwsax::train(series, cfg);
  const SymbolizerModel paa_model = edwsax::train(series, cfg_paa);
  CHECK(raw_model.breakpoints().interior()[0] !=
        paa_model.breakpoints().interior()[0]);
}

TEST_CASE("train falls back to the gaussian reference on flat data") {
  const std::vector<TimeSeries> series = {TimeSeries({3.0, 3.0, 3.0, 3.0})};
  TrainConfig cfg;
  cfg.alphabet_size = 4;
  const SymbolizerModel model = edwsax::train(series, cfg);
  CHECK(model.kind() == SymbolizerModel::Kind::gaussian_reference);
  CHECK(model.breakpoints() == edwsax::gaussian_breakpoints(4));
  CHECK(model.centroids() == edwsax::gaussian_centroids(4));
  CHECK_FALSE(model.density().has_value());
}

TEST_CASE("train rejects an empty training set") {
  CHECK_THROWS_AS(edwsax::train({}, TrainConfig{}), edwsax::Error);
}

TEST_CASE("symbolize maps values through the breakpoints, ties go up") {
  const SymbolizerModel model = edwsax::gaussian_model(4);
  // Interior edges at -0.6745, 0, 0.6745. A value exactly on an edge takes
  // the bin above it.
  const double edge = model.breakpoints().interior()[0];
  const PaaSeries p({-1.0, edge, -0.1, 0.0, 0.5, 2.0}, 6);
  const SymbolWord word = edwsax::symbolize(model, p);
  REQUIRE(word.length() == 6);
  CHECK(word.alphabet_size == 4);
  CHECK(word.source_length == 6);
  const std::vector<std::uint8_t> expect = {0, 1, 1, 2, 2, 3};
  CHECK(word.symbols == expect);
}

TEST_CASE("reconstruct expands centroids back to full length") {
  const SymbolizerModel model = tiny_kde_model();
  SymbolWord word;
  word.symbols = {0, 2};
  word.alphabet_size = 3;
  word.source_length = 5;
  const TimeSeries rec = edwsax::reconstruct(model, word, 5);
  REQUIRE(rec.size() == 5);
  // Fractional segments split 2.5/2.5, so point midpoints 0.5, 1.5 fall in
  // segment 0 and midpoints 2.5, 3.5, 4.5 in segment 1.
  CHECK(rec[0] == -1.0);
  CHECK(rec[1] == -1.0);
  CHECK(rec[2] == 1.25);
  CHECK(rec[3] == 1.25);
  CHECK(rec[4] == 1.25);
}

TEST_CASE("reconstruct validates word and length") {
  const SymbolizerModel model = tiny_kde_model();
  SymbolWord word;
  word.symbols = {0, 1};
  word.alphabet_size = 5;
  word.source_length = 4;
  CHECK_THROWS_AS(edwsax::reconstruct(model, word, 4), edwsax::WordMismatch);
  word.alphabet_size = 3;
  CHECK_THROWS_AS(edwsax::reconstruct(model, word, 1), edwsax::InvalidLength);
}

TEST_CASE("symbolizing a reconstruction is idempotent when w divides n") {
  std::mt19937_64 rng(17);
  const SymbolizerModel model = edwsax::gaussian_model(6);
  const TimeSeries ts = testrng::normal_series(rng, 32);
  const SymbolWord word = edwsax::symbolize(model, edwsax::paa(ts, 8));
  const TimeSeries rec = edwsax::reconstruct(model, word, 32);
  const SymbolWord again = edwsax::symbolize(model, edwsax::paa(rec, 8));
  CHECK(word == again);
}

TEST_CASE("model serialization round trips bit exactly") {
  const SymbolizerModel model = tiny_kde_model();
  const std::string data = edwsax::serialize_model(model);
  const SymbolizerModel back = edwsax::deserialize_model(data);
  CHECK(back.kind() == SymbolizerModel::Kind::kde);
  CHECK(back.breakpoints() == model.breakpoints());
  CHECK(back.centroids() == model.centroids());
  CHECK(std::signbit(back.centroids()[1]));
  CHECK(back.info().kernel.kind == KernelKind::epanechnikov);
  CHECK(back.info().bandwidth_rule.name() == "fixed:0.5");
  CHECK(back.info().bandwidth == 0.5);
  CHECK(back.info().sample_count == 7);
  CHECK(edwsax::serialize_model(back) == data);
}

TEST_CASE("serialization keeps a NaN bandwidth intact") {
  const SymbolizerModel model = edwsax::gaussian_model(3);
  const SymbolizerModel back =
      edwsax::deserialize_model(edwsax::serialize_model(model));
  CHECK(back.kind() == SymbolizerModel::Kind::gaussian_reference);
  CHECK(std::isnan(back.info().bandwidth));
  CHECK(back.breakpoints() == model.breakpoints());
}

TEST_CASE("deserialization rejects malformed streams") {
  // gaussian_model(3) serializes to: 6 byte magic, version, kind, u16
  // alphabet, kernel byte, rule length + "silverman", f64 bandwidth,
  // u64 count, 2 interior f64, 3 centroid f64.
  const std::string good = edwsax::serialize_model(edwsax::gaussian_model(3));
  REQUIRE(good.size() == 77);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(edwsax::deserialize_model(bad_magic), edwsax::CorruptModel);

  std::string future = good;
  future[6] = 2;
  CHECK_THROWS_AS(edwsax::deserialize_model(future),
                  edwsax::FormatVersionMismatch);

  std::string bad_kind = good;
  bad_kind[7] = 2;
  CHECK_THROWS_AS(edwsax::deserialize_model(bad_kind), edwsax::CorruptModel);

  std::string bad_alpha = good;
  bad_alpha[8] = 1;
  bad_alpha[9] = 0;
  CHECK_THROWS_AS(edwsax::deserialize_model(bad_alpha), edwsax::CorruptModel);

  std::string bad_kernel = good;
  bad_kernel[10] = 7;
  CHECK_THROWS_AS(edwsax::deserialize_model(bad_kernel), edwsax::CorruptModel);

  std::string bad_rule = good;
  bad_rule[12] = 'x';
  CHECK_THROWS_AS(edwsax::deserialize_model(bad_rule), edwsax::CorruptModel);

  CHECK_THROWS_AS(edwsax::deserialize_model(good.substr(0, good.size() - 1)),
                  edwsax::CorruptModel);
  CHECK_THROWS_AS(edwsax::deserialize_model(good + "!"), edwsax::CorruptModel);
  CHECK_THROWS_AS(edwsax::deserialize_model(""), edwsax::CorruptModel);

  // Swapping the two interior breakpoints breaks monotonicity.
  std::string unsorted = good;
  for (int i = 0; i < 8; ++i) std::swap(unsorted[37 + i], unsorted[45 + i]);
  CHECK_THROWS_AS(edwsax::deserialize_model(unsorted), edwsax::CorruptModel);
}

TEST_CASE("models save to and load from disk") {
  const auto path = std::filesystem::temp_directory_path() /
                    "edwsax_test_model.edws";
  const SymbolizerModel model = tiny_kde_model();
  edwsax::save_model(model, path);
  const SymbolizerModel back = edwsax::load_model(path);
  CHECK(back.breakpoints() == model.breakpoints());
  CHECK(back.centroids() == model.centroids());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(edwsax::load_model(path), edwsax::Error);
}

TEST_CASE("training a kde model end to end symbolizes new data") {
  std::mt19937_64 rng(404);
  std::vector<TimeSeries> series;
  for (int i = 0; i < 20; ++i) series.push_back(testrng::normal_series(rng, 128));
  TrainConfig cfg;
  cfg.alphabet_size = 5;
  const SymbolizerModel model = edwsax::train(series, cfg);
  CHECK(model.kind() == SymbolizerModel::Kind::kde);
  // ISJ on 2560 gaussian points stays in a sane range and the breakpoints
  // land near the normal reference cuts.
  const Breakpoints ref = edwsax::gaussian_breakpoints(5);
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    CHECK(model.breakpoints().interior()[i] ==
          Catch::Approx(ref.interior()[i]).margin(0.12));
  }
  const TimeSeries fresh = testrng::normal_series(rng, 64);
  const SymbolWord word =
      edwsax::symbolize(model, edwsax::paa(edwsax::znormalize(fresh), 32));
  CHECK(word.length() == 32);
  for (std::uint8_t s : word.symbols) CHECK(s < 5);
}
