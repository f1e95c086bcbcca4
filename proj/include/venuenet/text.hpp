#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace venuenet::text {

/// Folds Latin diacritics to ASCII (U+00C0..U+017F) and lowercases ASCII
/// letters. Code points outside the folding table pass through unchanged.
std::string fold_lower(std::string_view utf8);

/// Trims and collapses internal whitespace runs to a single space.
std::string collapse_whitespace(std::string_view s);

/// Canonical form used for author identity and alignment: folded,
/// lowercased, whitespace-collapsed.
std::string normalize(std::string_view s);

/// Canopy key: final whitespace-delimited token of the normalized name.
/// Empty only when the name has no non-space characters.
std::string last_name_key(std::string_view full_name);

/// Title tokens for the Jaccard stage: normalized, ASCII punctuation
/// removed, split on whitespace, sorted and de-duplicated.
std::vector<std::string> title_tokens(std::string_view title);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace venuenet::text
