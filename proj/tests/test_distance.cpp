#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "edwsax/distance.hpp"
#include "edwsax/symbolizer.hpp"
#include "support/random.hpp"

using edwsax::Breakpoints;
using edwsax::DistanceTable;
using edwsax::SymbolizerModel;
using edwsax::SymbolWord;
using edwsax::TimeSeries;

namespace {

// Six-bin table used by the worked examples below.
const std::vector<double> example_interior = {-0.33, -0.01, 0.66, 0.97, 1.54};

SymbolWord word_of(std::vector<std::uint8_t> symbols, int a, std::size_t n) {
  SymbolWord w;
  w.symbols = std::move(symbols);
  w.alphabet_size = a;
  w.source_length = n;
  return w;
}

}  // namespace

TEST_CASE("lookup cells measure the gap between non adjacent bins") {
  const DistanceTable t = edwsax::build_lookup(Breakpoints(example_interior));
  REQUIRE(t.alphabet_size() == 6);
  CHECK(t.cell(0, 2) == Catch::Approx(0.32).epsilon(1e-12));
  CHECK(t.cell(0, 3) == Catch::Approx(0.99).epsilon(1e-12));
  CHECK(t.cell(0, 5) == Catch::Approx(1.87).epsilon(1e-12));
  CHECK(t.cell(1, 3) == Catch::Approx(0.67).epsilon(1e-12));
  CHECK(t.cell(3, 5) == Catch::Approx(0.57).epsilon(1e-12));
}

TEST_CASE("lookup is symmetric with zero diagonal bands") {
  const DistanceTable t = edwsax::build_lookup(Breakpoints(example_interior));
  const int a = t.alphabet_size();
  for (int q = 0; q < a; ++q) {
    for (int c = 0; c < a; ++c) {
      CHECK(t.cell(q, c) == t.cell(c, q));
      CHECK(t.cell(q, c) >= 0.0);
      if (std::abs(q - c) <= 1) {
        CHECK(t.cell(q, c) == 0.0);
      } else {
        CHECK(t.cell(q, c) > 0.0);
      }
    }
  }
}

TEST_CASE("two symbol alphabet gives an all zero table") {
  const DistanceTable t = edwsax::build_lookup(Breakpoints({0.0}));
  REQUIRE(t.alphabet_size() == 2);
  for (int q = 0; q < 2; ++q) {
    for (int c = 0; c < 2; ++c) CHECK(t.cell(q, c) == 0.0);
  }
}

TEST_CASE("euclidean distance") {
  CHECK(edwsax::euclidean(TimeSeries({0.0, 0.0}), TimeSeries({3.0, 4.0})) ==
        Catch::Approx(5.0));
  const TimeSeries x({1.0, -2.0, 0.5});
  CHECK(edwsax::euclidean(x, x) == 0.0);
  CHECK_THROWS_AS(edwsax::euclidean(x, TimeSeries({1.0, 2.0})),
                  edwsax::LengthMismatch);

  std::mt19937_64 rng(88);
  const TimeSeries a = testrng::normal_series(rng, 100);
  const TimeSeries b = testrng::normal_series(rng, 100);
  double sum = 0.0;
  for (std::size_t i = 0; i < 100; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(edwsax::euclidean(a, b) == Catch::Approx(std::sqrt(sum)).margin(1e-12));
}

TEST_CASE("mindist evaluates the scaled cell sum") {
  const DistanceTable t = edwsax::build_lookup(Breakpoints(example_interior));
  const SymbolWord aa = word_of({0, 0}, 6, 4);
  const SymbolWord cc = word_of({2, 2}, 6, 4);
  // sqrt(4/2) * sqrt(0.32^2 + 0.32^2) = 2 * 0.32
  CHECK(edwsax::mindist(aa, cc, t, 4) == Catch::Approx(0.64).epsilon(1e-12));
  CHECK(edwsax::mindist(aa, aa, t, 4) == 0.0);
  CHECK(edwsax::mindist(cc, aa, t, 4) ==
        edwsax::mindist(aa, cc, t, 4));

  const SymbolWord ab = word_of({0, 1}, 6, 4);
  const SymbolWord ba = word_of({1, 0}, 6, 4);
  CHECK(edwsax::mindist(ab, ba, t, 4) == 0.0);
}

TEST_CASE("mindist validates its inputs") {
  const DistanceTable t = edwsax::build_lookup(Breakpoints(example_interior));
  const SymbolWord q = word_of({0, 2}, 6, 8);
  CHECK_THROWS_AS(edwsax::mindist(q, word_of({0, 2, 4}, 6, 8), t, 8),
                  edwsax::LengthMismatch);
  CHECK_THROWS_AS(edwsax::mindist(q, word_of({0, 2}, 5, 8), t, 8),
                  edwsax::WordMismatch);
  CHECK_THROWS_AS(edwsax::mindist(q, word_of({0, 2}, 6, 8), t, 1),
                  edwsax::InvalidLength);
}

TEST_CASE("tlb is undefined for identical series") {
  const SymbolizerModel model = edwsax::gaussian_model(8);
  const TimeSeries x({0.5, -0.5, 1.0, -1.0});
  CHECK_FALSE(edwsax::tlb(x, x, model, 2).has_value());
}

TEST_CASE("tlb lies in the unit interval for random pairs") {
  std::mt19937_64 rng(1234);
  const SymbolizerModel model = edwsax::gaussian_model(10);
  for (int rep = 0; rep < 50; ++rep) {
    const TimeSeries q = edwsax::znormalize(testrng::normal_series(rng, 64));
    const TimeSeries c = edwsax::znormalize(testrng::normal_series(rng, 64));
    const auto value = edwsax::tlb(q, c, model, 16);
    REQUIRE(value.has_value());
    CHECK(*value >= 0.0);
    CHECK(*value <= 1.0);
  }
}

TEST_CASE("mindist lower bounds the euclidean distance") {
  // The defining property, exercised across alphabets, word lengths and both
  // model families.
  std::mt19937_64 rng(4321);
  std::vector<TimeSeries> train;
  for (int i = 0; i < 10; ++i) train.push_back(testrng::bimodal_series(rng, 96));
  edwsax::TrainConfig cfg;
  cfg.alphabet_size = 7;
  cfg.bandwidth = edwsax::BandwidthRule::silverman();
  const SymbolizerModel kde = edwsax::train(train, cfg);
  const SymbolizerModel gauss = edwsax::gaussian_model(7);

  for (int rep = 0; rep < 100; ++rep) {
    const TimeSeries q = edwsax::znormalize(testrng::bimodal_series(rng, 96));
    const TimeSeries c = edwsax::znormalize(testrng::normal_series(rng, 96));
    const double ed = edwsax::euclidean(q, c);
    for (std::size_t w : {4u, 16u, 96u}) {
      for (const SymbolizerModel* model : {&kde, &gauss}) {
        const SymbolWord wq = edwsax::symbolize(*model, edwsax::paa(q, w));
        const SymbolWord wc = edwsax::symbolize(*model, edwsax::paa(c, w));
        const double md = edwsax::mindist(wq, wc, model->lookup(), 96);
        CAPTURE(rep, w, model == &kde);
        CHECK(md <= ed + 1e-9);
      }
    }
  }
}

TEST_CASE("nested quantile refinement makes mindist monotone in a") {
  // Dyadic alphabets of the gaussian partition nest exactly, so refining the
  // alphabet can only tighten each pair's lower bound.
  std::mt19937_64 rng(555);
  const std::vector<int> alphabets = {4, 8, 16, 32};
  std::vector<SymbolizerModel> models;
  for (int a : alphabets) models.push_back(edwsax::gaussian_model(a));

  for (int rep = 0; rep < 500; ++rep) {
    const TimeSeries q = edwsax::znormalize(testrng::normal_series(rng, 32));
    const TimeSeries c = edwsax::znormalize(testrng::normal_series(rng, 32));
    double prev = -1.0;
    for (const SymbolizerModel& model : models) {
      const SymbolWord wq = edwsax::symbolize(model, edwsax::paa(q, 8));
      const SymbolWord wc = edwsax::symbolize(model, edwsax::paa(c, 8));
      const double md = edwsax::mindist(wq, wc, model.lookup(), 32);
      CAPTURE(rep, model.alphabet_size());
      CHECK(md >= prev - 1e-12);
      prev = md;
    }
  }
}
