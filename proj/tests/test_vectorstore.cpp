#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "raguav/embedding.hpp"
#include "raguav/error.hpp"
#include "raguav/io.hpp"
#include "raguav/vectorstore.hpp"
#include "test_support.hpp"

using namespace raguav;
using namespace raguav::vectorstore;
using embedding::EmbeddingVector;

namespace {

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dim, const std::string& spec = "s") {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  for (auto& x : v) x = g(rng);
  return {embedding::normalize(v), spec};
}

FlatStore random_store(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  FlatStore store;
  for (std::size_t i = 0; i < n; ++i)
    store.upsert(StoredEntry{"c" + std::to_string(i), random_unit(rng, dim), "payload " + std::to_string(i)});
  return store;
}

/// Independent oracle: score everything, full sort, cut.
std::vector<std::pair<std::string, double>> naive_top_k(const FlatStore& store,
                                                        const EmbeddingVector& q, std::size_t k) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& e : store.entries()) {
    double s = 0;
    for (std::size_t i = 0; i < q.values.size(); ++i) s += q.values[i] * e.vector.values[i];
    all.emplace_back(e.chunk_id, s);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

EmbeddingVector vec(std::vector<double> v) { return {embedding::normalize(v), "s"}; }

}  // namespace

TEST(FlatStore, ExactTopK) {
  FlatStore store;
  store.upsert(StoredEntry{"a", vec({1, 0}), "A"});
  store.upsert(StoredEntry{"b", vec({0, 1}), "B"});
  store.upsert(StoredEntry{"c", vec({1, 1}), "C"});
  auto r = store.top_k(vec({1, 0.1}), 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].chunk_id, "a");
  EXPECT_EQ(r[0].rank, 1u);
  EXPECT_EQ(r[0].payload, "A");
  EXPECT_EQ(r[1].chunk_id, "c");
  EXPECT_EQ(r[1].rank, 2u);
}

TEST(FlatStore, SingleEntryAndLargeK) {
  FlatStore store;
  store.upsert(StoredEntry{"only", vec({0.2, 0.9}), "x"});
  auto r = store.top_k(vec({1, 0}), 10);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].chunk_id, "only");
}

TEST(FlatStore, TiesBreakByChunkId) {
  FlatStore store;
  store.upsert(StoredEntry{"z", vec({1, 0}), ""});
  store.upsert(StoredEntry{"m", vec({1, 0}), ""});
  store.upsert(StoredEntry{"a", vec({1, 0}), ""});
  auto r = store.top_k(vec({1, 0}), 3);
  EXPECT_EQ(r[0].chunk_id, "a");
  EXPECT_EQ(r[1].chunk_id, "m");
  EXPECT_EQ(r[2].chunk_id, "z");
}

TEST(FlatStore, Errors) {
  FlatStore store;
  EXPECT_THROW(store.top_k(vec({1, 0}), 1), StoreError);
  store.upsert(StoredEntry{"a", vec({1, 0}), ""});
  EXPECT_THROW(store.top_k(vec({1, 0}), 0), StoreError);
  EXPECT_THROW(store.top_k(vec({1, 0, 0}), 1), StoreError);
  EXPECT_THROW(store.upsert(StoredEntry{"b", vec({1, 0, 0}), ""}), StoreError);

  embedding::EmbedderSpec spec;
  spec.dimension = 2;
  FlatStore tagged(spec);
  tagged.upsert(StoredEntry{"a", EmbeddingVector{{1, 0}, spec.id()}, ""});
  EXPECT_THROW(tagged.top_k(EmbeddingVector{{1, 0}, "other-spec"}, 1), StoreError);
  EXPECT_NO_THROW(tagged.top_k(EmbeddingVector{{1, 0}, spec.id()}, 1));
}

TEST(FlatStore, UpsertReplacesInPlace) {
  FlatStore store;
  store.upsert(StoredEntry{"a", vec({1, 0}), "old"});
  store.upsert(StoredEntry{"b", vec({0, 1}), "b"});
  store.upsert(StoredEntry{"a", vec({0, 1}), "new"});
  ASSERT_EQ(store.size(), 2u);
  EXPECT_EQ(store.entries()[0].payload, "new");
}

TEST(FlatStore, MatchesNaiveOracleOnRandomStores) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t dim = 2 + rng() % 16;
    auto store = random_store(rng, n, dim);
    auto q = random_unit(rng, dim);
    const std::size_t k = 1 + rng() % (n + 3);
    auto got = store.top_k(q, k);
    auto want = naive_top_k(store, q, k);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].chunk_id, want[i].first);
      ASSERT_EQ(got[i].score, want[i].second);
      ASSERT_EQ(got[i].rank, i + 1);
    }
  }
}

TEST(FlatStore, PrefixMonotonicityAndPermutation) {
  std::mt19937_64 rng(5);
  auto store = random_store(rng, 25, 8);
  auto q = random_unit(rng, 8);
  auto full = store.top_k(q, 25);
  ASSERT_EQ(full.size(), 25u);
  std::vector<std::string> ids;
  for (const auto& r : full) {
    ids.push_back(r.chunk_id);
    EXPECT_LE(std::abs(r.score), 1.0 + 1e-6);
  }
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
  for (std::size_t k = 1; k < 25; ++k) {
    auto a = store.top_k(q, k);
    auto b = store.top_k(q, k + 1);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin())) << "k=" << k;
  }
}

TEST(FlatStore, SerializeRoundTrip) {
  std::mt19937_64 rng(9);
  embedding::EmbedderSpec spec;
  spec.dimension = 12;
  FlatStore store(spec);
  for (int i = 0; i < 10; ++i)
    store.upsert(StoredEntry{"c" + std::to_string(i), random_unit(rng, 12, spec.id()),
                             "line\n\"" + std::to_string(i)});
  const auto text = store.serialize();
  auto back = FlatStore::deserialize(text);
  EXPECT_EQ(back.serialize(), text);
  ASSERT_TRUE(back.embedder());
  EXPECT_EQ(back.embedder()->id(), spec.id());
  for (int t = 0; t < 20; ++t) {
    auto q = random_unit(rng, 12, spec.id());
    EXPECT_EQ(store.top_k(q, 4), back.top_k(q, 4));
  }
}

TEST(FlatStore, EmptyRoundTrip) {
  FlatStore empty;
  auto back = FlatStore::deserialize(empty.serialize());
  EXPECT_TRUE(back.empty());
  EXPECT_EQ(back.serialize(), empty.serialize());
}

TEST(FlatStore, SaveLoadFile) {
  testkit::TempDir tmp;
  std::mt19937_64 rng(3);
  auto store = random_store(rng, 6, 4);
  store.save(tmp / "s.store");
  auto back = FlatStore::load(tmp / "s.store");
  EXPECT_EQ(back.serialize(), store.serialize());
  EXPECT_THROW(FlatStore::load(tmp / "missing.store"), IoError);
}

TEST(FlatStore, TruncatedOrCorruptFiles) {
  std::mt19937_64 rng(4);
  const auto text = random_store(rng, 5, 4).serialize();
  const auto last_line = text.rfind('\n', text.size() - 2);
  EXPECT_THROW(FlatStore::deserialize(text.substr(0, last_line + 1)), FormatError);
  EXPECT_THROW(FlatStore::deserialize(text.substr(0, text.size() - 10)), FormatError);
  EXPECT_THROW(FlatStore::deserialize(""), FormatError);
  EXPECT_THROW(FlatStore::deserialize("{\"format\":\"other\"}\n"), FormatError);
  try {
    FlatStore::deserialize(text.substr(0, text.size() - 10));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
}
