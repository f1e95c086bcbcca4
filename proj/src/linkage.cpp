#include "venuenet/linkage.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "venuenet/error.hpp"
#include "venuenet/text.hpp"

namespace venuenet {

CanopyPartition canopy_partition(const Corpus& left, const Corpus& right) {
  std::map<std::string, std::pair<std::vector<RecordRef>, std::vector<RecordRef>>> by_key;
  CanopyPartition out;
  auto collect = [&](const Corpus& c, CorpusSource tag, bool is_left) {
    for (const auto& r : c.records()) {
      if (r.authors.empty()) {
        out.unmatchable.push_back({tag, r.id});
        continue;
      }
      for (const auto& a : r.authors) {
        auto& side = is_left ? by_key[a.last_name_key].first : by_key[a.last_name_key].second;
        // A record with two co-authors sharing a last name joins the canopy once.
        if (side.empty() || side.back().id != r.id) side.push_back({tag, r.id});
      }
    }
  };
  collect(left, CorpusSource::Metadata, true);
  collect(right, CorpusSource::Citation, false);
  for (auto& [key, sides] : by_key) {
    if (sides.first.empty() || sides.second.empty()) continue;
    Canopy canopy{key, std::move(sides.first)};
    canopy.members.insert(canopy.members.end(), sides.second.begin(), sides.second.end());
    std::sort(canopy.members.begin(), canopy.members.end());
    canopy.members.erase(std::unique(canopy.members.begin(), canopy.members.end()), canopy.members.end());
    out.canopies.push_back(std::move(canopy));
  }
  std::sort(out.unmatchable.begin(), out.unmatchable.end());
  return out;
}

TokenizedTitle TokenizedTitle::from(std::string_view title) { return {text::title_tokens(title)}; }

double jaccard_similarity(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t shared = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    const int c = i->compare(*j);
    if (c == 0) {
      ++shared;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t all = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(all);
}

int smith_waterman_score(std::string_view a, std::string_view b, const AlignmentScoring& scoring) {
  if (a.size() < b.size()) std::swap(a, b);  // b is the shorter: one row of |b|+1 cells
  std::vector<int> row(b.size() + 1, 0);
  int best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int diag = 0;  // H[i-1][j-1]
    const char ai = a[i - 1];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int up = row[j];  // H[i-1][j]
      const int sub = diag + (ai == b[j - 1] ? scoring.match : scoring.mismatch);
      const int h = std::max({0, sub, up + scoring.gap, row[j - 1] + scoring.gap});
      diag = up;
      row[j] = h;
      best = std::max(best, h);
    }
  }
  return best;
}

double smith_waterman_similarity(std::string_view a, std::string_view b, const AlignmentScoring& scoring) {
  if (a.empty() || b.empty() || scoring.match <= 0) return 0.0;
  const int score = smith_waterman_score(a, b, scoring);
  const double attainable = static_cast<double>(scoring.match) * static_cast<double>(std::min(a.size(), b.size()));
  return static_cast<double>(score) / attainable;
}

namespace {

struct PreparedSide {
  std::vector<TokenizedTitle> tokens;
  std::vector<std::string> aligned;  // normalized title used for alignment
};

PreparedSide prepare(const Corpus& c, Execution execution) {
  const auto& records = c.records();
  const auto n = static_cast<std::int64_t>(records.size());
  PreparedSide side;
  side.tokens.resize(records.size());
  side.aligned.resize(records.size());
#pragma omp parallel for schedule(static) if (execution == Execution::Parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    side.tokens[i] = TokenizedTitle::from(records[i].title);
    side.aligned[i] = text::normalize(records[i].title);
  }
  return side;
}

struct Scored {
  std::uint32_t left;
  std::uint32_t right;
  double jaccard;
  double sw;
  bool accepted;
};

}  // namespace

std::vector<MatchPair> link_corpora(const Corpus& left, const Corpus& right, const LinkageOptions& options) {
  const CanopyPartition blocks = canopy_partition(left, right);

  // Candidate pairs, de-duplicated across overlapping canopies.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& canopy : blocks.canopies) {
    const auto split = std::partition_point(canopy.members.begin(), canopy.members.end(),
                                            [](const RecordRef& m) { return m.source == CorpusSource::Metadata; });
    for (auto l = canopy.members.begin(); l != split; ++l) {
      const auto li = static_cast<std::uint32_t>(*left.index_of(l->id));
      for (auto r = split; r != canopy.members.end(); ++r) {
        pairs.emplace_back(li, static_cast<std::uint32_t>(*right.index_of(r->id)));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  const PreparedSide lp = prepare(left, options.execution);
  const PreparedSide rp = prepare(right, options.execution);

  std::vector<Scored> scored(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 64) if (options.execution == Execution::Parallel)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto [l, r] = pairs[k];
    Scored s{l, r, jaccard_title_similarity(lp.tokens[l], rp.tokens[r]), 0.0, false};
    if (s.jaccard >= options.jaccard_min) {
      s.sw = smith_waterman_similarity(lp.aligned[l], rp.aligned[r], options.scoring);
      s.accepted = s.sw >= options.sw_min;
    }
    scored[k] = s;
  }

  // One best right record per left record.
  std::vector<const Scored*> best(left.size(), nullptr);
  for (const auto& s : scored) {
    if (!s.accepted) continue;
    const Scored*& cur = best[s.left];
    if (cur == nullptr || s.sw > cur->sw ||
        (s.sw == cur->sw && right.records()[s.right].id < right.records()[cur->right].id)) {
      cur = &s;
    }
  }
  std::vector<MatchPair> out;
  for (const Scored* s : best) {
    if (s == nullptr) continue;
    out.push_back({left.records()[s->left].id, right.records()[s->right].id, s->jaccard, s->sw});
  }
  std::sort(out.begin(), out.end(), [](const MatchPair& a, const MatchPair& b) { return a.left < b.left; });
  return out;
}

namespace {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad number \"" + std::string(s) + "\"", line);
  }
  return v;
}

}  // namespace

void write_matches_tsv(std::ostream& out, const std::vector<MatchPair>& matches) {
  out << "left_id\tright_id\tjaccard\tsw_similarity\n";
  for (const auto& m : matches) {
    out << m.left << '\t' << m.right << '\t' << format_real(m.jaccard) << '\t' << format_real(m.sw_similarity)
        << '\n';
  }
}

std::vector<MatchPair> read_matches_tsv(std::istream& in) {
  std::vector<MatchPair> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || (n == 1 && line.starts_with("left_id"))) continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4) throw ParseError("expected 4 tab-separated columns", n);
    out.push_back({std::string(cols[0]), std::string(cols[1]), parse_real(cols[2], n), parse_real(cols[3], n)});
  }
  return out;
}

Corpus attach_references(const Corpus& left, const Corpus& right, const std::vector<MatchPair>& matches) {
  std::unordered_map<std::string, std::string> right_to_left;
  std::unordered_map<std::string, std::string> left_to_right;
  for (const auto& m : matches) {
    right_to_left.emplace(m.right, m.left);
    left_to_right.emplace(m.left, m.right);
  }
  Corpus out;
  for (const auto& [key, info] : left.venues()) out.add_venue(key, info);
  for (const auto& r : left.records()) {
    PublicationRecord merged = r;
    if (const auto it = left_to_right.find(r.id); it != left_to_right.end()) {
      const PublicationRecord* cited = right.find(it->second);
      if (cited == nullptr) throw InputError("match names unknown right record \"" + it->second + "\"");
      std::unordered_set<std::string> seen;
      for (const auto& ref : merged.references) {
        if (ref.resolved) seen.insert(ref.target);
      }
      for (const auto& ref : cited->references) {
        ReferenceEntry e = ref;
        if (e.resolved) {
          if (const auto t = right_to_left.find(e.target); t != right_to_left.end()) e.target = t->second;
          if (seen.contains(e.target)) continue;  // already cited by the left record
        }
        merged.references.push_back(std::move(e));
      }
    }
    out.add(std::move(merged));
  }
  return out;
}

}  // namespace venuenet
