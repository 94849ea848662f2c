#pragma once

/**
 * @file io.hpp
 * @brief Sequence CSV (`n,a_n,exact_num,exact_den`), hit certificates and
 *        report JSON.
 */

#include "convexsum/convexseq.hpp"
#include "convexsum/sequence.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace convexsum {

void write_sequence_csv(std::ostream& os, const ConvexSequence& seq);
/// N is the row count; rows must be n = 1..N in order. Exact columns are
/// used only when every row fills them.
ConvexSequence read_sequence_csv(std::istream& is);
ConvexSequence read_sequence_csv_file(const std::string& path);

/// [{n, alpha, num, den}]; num/den are JSON integers when they fit in 64 bits,
/// decimal strings otherwise.
nlohmann::json hits_to_json(const ConvexSequence& seq);
std::vector<HitCertificate> hits_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConvexityReport& r);
nlohmann::json to_json(const SequenceMetadata& m);

/// Shortest decimal text that reads back to the same long double.
std::string format_long_double(long double v);

nlohmann::json read_json_file(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace convexsum
