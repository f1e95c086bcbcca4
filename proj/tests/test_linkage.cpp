#include <doctest.h>

#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "venuenet/linkage.hpp"
#include "venuenet/text.hpp"

using namespace venuenet;

namespace {

PublicationRecord rec(std::string id, std::string title, std::vector<std::string> authors) {
  PublicationRecord r;
  r.id = std::move(id);
  r.title = std::move(title);
  for (const auto& a : authors) r.authors.push_back(AuthorName::from(a));
  return r;
}

Corpus corpus(std::vector<PublicationRecord> rs) {
  Corpus c;
  for (auto& r : rs) c.add(std::move(r));
  return c;
}

std::string random_string(gen::Rng& rng, std::size_t max_len, int alphabet) {
  std::string s(std::uniform_int_distribution<std::size_t>(0, max_len)(rng), 'a');
  for (char& ch : s) ch = static_cast<char>('a' + std::uniform_int_distribution<int>(0, alphabet - 1)(rng));
  return s;
}

LinkageOptions options(double jaccard, double sw, Execution e = Execution::Parallel) {
  LinkageOptions o;
  o.jaccard_min = jaccard;
  o.sw_min = sw;
  o.execution = e;
  return o;
}

}  // namespace

TEST_SUITE("linkage") {
  TEST_CASE("canopies") {
    SUBCASE("shared last name") {
      const auto p = canopy_partition(corpus({rec("a1", "t", {"Michael Ley"})}), corpus({rec("b1", "t", {"M. Ley"})}));
      REQUIRE(p.canopies.size() == 1);
      CHECK(p.canopies[0].key == "ley");
      CHECK(p.canopies[0].members.size() == 2);
    }
    SUBCASE("overlap") {
      const auto p = canopy_partition(corpus({rec("a1", "t", {"Michael Ley", "Ralf Klamma"})}),
                                      corpus({rec("b1", "t", {"M. Ley"}), rec("b2", "t", {"R. Klamma"})}));
      REQUIRE(p.canopies.size() == 2);
      CHECK(p.canopies[0].key == "klamma");
      CHECK(p.canopies[1].key == "ley");
      const RecordRef a1{CorpusSource::Metadata, "a1"};
      for (const auto& c : p.canopies) CHECK(std::count(c.members.begin(), c.members.end(), a1) == 1);
    }
    SUBCASE("disjoint names and authorless records") {
      const auto p = canopy_partition(corpus({rec("a1", "t", {"Michael Ley"}), rec("a2", "t", {})}),
                                      corpus({rec("b1", "t", {"Ralf Klamma"})}));
      CHECK(p.canopies.empty());
      REQUIRE(p.unmatchable.size() == 1);
      CHECK(p.unmatchable[0].id == "a2");
    }
  }

  TEST_CASE("jaccard") {
    const std::vector<std::string> abc{"a", "b", "c"}, bcd{"b", "c", "d"}, xy{"x", "y"};
    CHECK(jaccard_similarity(abc, abc) == 1.0);
    CHECK(jaccard_similarity(abc, xy) == 0.0);
    CHECK(jaccard_similarity(abc, bcd) == 0.5);
    CHECK(jaccard_title_similarity(TokenizedTitle::from("Mapping the backbone of science"),
                                   TokenizedTitle::from("Mapping the backbone of science.")) == 1.0);
  }

  TEST_CASE("smith-waterman examples") {
    CHECK(smith_waterman_similarity("data mining", "data mining") == 1.0);
    CHECK(smith_waterman_score("data mining", "data mining") == 22);
    CHECK(smith_waterman_similarity("", "data mining") == 0.0);
    const int ref = oracle::smith_waterman("data mining", "data minning");
    CHECK(smith_waterman_score("data mining", "data minning") == ref);
    CHECK(smith_waterman_similarity("data mining", "data minning") == doctest::Approx(ref / 22.0).epsilon(1e-15));
  }

  TEST_CASE("smith-waterman equals the full table and is symmetric") {
    gen::Rng rng(11);
    const AlignmentScoring alt{3, -2, -2};
    for (int i = 0; i < 2000; ++i) {
      const auto a = random_string(rng, 64, i % 2 ? 4 : 26);
      const auto b = random_string(rng, 64, i % 2 ? 4 : 26);
      REQUIRE(smith_waterman_score(a, b) == oracle::smith_waterman(a, b));
      REQUIRE(smith_waterman_score(a, b, alt) == oracle::smith_waterman(a, b, alt));
      REQUIRE(smith_waterman_similarity(a, b) == smith_waterman_similarity(b, a));
      const double s = smith_waterman_similarity(a, b);
      REQUIRE((s >= 0.0 && s <= 1.0));
    }
  }

  TEST_CASE("link examples") {
    SUBCASE("identical records") {
      const auto m = link_corpora(corpus({rec("a", "Mapping the backbone of science", {"K. Boyack"})}),
                                  corpus({rec("b", "Mapping the backbone of science", {"Kevin Boyack"})}));
      REQUIRE(m.size() == 1);
      CHECK(m[0].jaccard == 1.0);
      CHECK(m[0].sw_similarity == 1.0);
    }
    SUBCASE("no shared author name") {
      CHECK(link_corpora(corpus({rec("a", "Same title here", {"Ann Smith"})}),
                         corpus({rec("b", "Same title here", {"Bob Jones"})}))
                .empty());
    }
    SUBCASE("trailing punctuation matched, unrelated title gated out") {
      const auto left = corpus({rec("a", "Mapping the backbone of science", {"Kevin Boyack"}),
                                rec("z", "Neural codes in the cortex", {"Kevin Boyack"})});
      const auto right = corpus({rec("b", "Mapping the backbone of science.", {"K. Boyack"})});
      const auto m = link_corpora(left, right);
      REQUIRE(m.size() == 1);
      CHECK(m[0].left == "a");
      CHECK(m[0].right == "b");
      // hand values: identical token sets; one trailing '.' inserted
      CHECK(m[0].jaccard == 1.0);
      CHECK(m[0].sw_similarity == 1.0);
      CHECK(jaccard_title_similarity(TokenizedTitle::from("Neural codes in the cortex"),
                                     TokenizedTitle::from("Mapping the backbone of science.")) ==
            doctest::Approx(1.0 / 9.0));
    }
  }

  TEST_CASE("best match per left record, ties to smallest right id") {
    const auto left = corpus({rec("a", "graph mining at scale today", {"Ann Smith"})});
    const auto right = corpus({rec("r2", "graph mining at scale today", {"A. Smith"}),
                               rec("r1", "graph mining at scale today", {"Ann Smith"}),
                               rec("r3", "graph mining at scale todax", {"Ann Smith"})});
    const auto m = link_corpora(left, right);
    REQUIRE(m.size() == 1);
    CHECK(m[0].right == "r1");
  }

  TEST_CASE("blocking completeness and monotonicity against exhaustive comparison") {
    gen::Rng rng(5);
    const auto fx = gen::linkage_fixture(rng, 150);
    const LinkageOptions opt;
    const auto m = link_corpora(fx.left, fx.right, opt);
    // exhaustive: every pair sharing a last-name key, best per left
    std::map<std::string, MatchPair> best;
    for (const auto& l : fx.left.records()) {
      const auto lt = TokenizedTitle::from(l.title);
      for (const auto& r : fx.right.records()) {
        bool share = false;
        for (const auto& a : l.authors)
          for (const auto& b : r.authors) share = share || a.last_name_key == b.last_name_key;
        if (!share) continue;
        const double j = jaccard_title_similarity(lt, TokenizedTitle::from(r.title));
        if (j < opt.jaccard_min) continue;
        const double s = smith_waterman_similarity(text::normalize(l.title), text::normalize(r.title));
        if (s < opt.sw_min) continue;
        auto it = best.find(l.id);
        if (it == best.end() || s > it->second.sw_similarity ||
            (s == it->second.sw_similarity && r.id < it->second.right)) {
          best[l.id] = {l.id, r.id, j, s};
        }
      }
    }
    REQUIRE(m.size() == best.size());
    for (const auto& p : m) CHECK(best.at(p.left) == p);

    std::size_t prev = m.size();
    for (double sw : {0.92, 0.95, 0.99}) {
      const auto n = link_corpora(fx.left, fx.right, options(0.5, sw)).size();
      CHECK(n <= prev);
      prev = n;
    }
    prev = m.size();
    for (double jm : {0.7, 0.9, 1.0}) {
      const auto n = link_corpora(fx.left, fx.right, options(jm, 0.9)).size();
      CHECK(n <= prev);
      prev = n;
    }
  }

  TEST_CASE("serial and parallel matching agree") {
    gen::Rng rng(9);
    const auto fx = gen::linkage_fixture(rng, 200);
    CHECK(link_corpora(fx.left, fx.right, options(0.5, 0.9, Execution::Serial)) ==
          link_corpora(fx.left, fx.right, options(0.5, 0.9, Execution::Parallel)));
  }

  TEST_CASE("match table round trip") {
    const std::vector<MatchPair> m{{"a", "b", 0.75, 0.9333333333333333}, {"c", "d", 1.0, 1.0}};
    std::stringstream s;
    write_matches_tsv(s, m);
    CHECK(read_matches_tsv(s) == m);
  }

  TEST_CASE("attach references rewrites matched right ids") {
    PublicationRecord a = rec("a", "first paper title", {"Ann Smith"});
    a.venue_key = "v1";
    a.references = {ReferenceEntry::to_record("b")};
    PublicationRecord b = rec("b", "second paper title", {"Bob Jones"});
    b.venue_key = "v2";
    const Corpus left = corpus({a, b});
    PublicationRecord ra = rec("ra", "first paper title", {"A. Smith"});
    ra.references = {ReferenceEntry::to_record("rb"), ReferenceEntry::raw("Some Book"), ReferenceEntry::to_record("elsewhere")};
    PublicationRecord rb = rec("rb", "second paper title", {"B. Jones"});
    const Corpus right = corpus({ra, rb});
    const auto m = link_corpora(left, right);
    REQUIRE(m.size() == 2);
    const Corpus merged = attach_references(left, right, m);
    const auto* pa = merged.find("a");
    REQUIRE(pa);
    // "rb" -> "b" is already cited by a, so it is not repeated
    REQUIRE(pa->references.size() == 3);
    CHECK(pa->references[0] == ReferenceEntry::to_record("b"));
    CHECK(pa->references[1] == ReferenceEntry::raw("Some Book"));
    CHECK(pa->references[2] == ReferenceEntry::to_record("elsewhere"));
  }
}
