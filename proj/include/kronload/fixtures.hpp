#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kronload/kronecker.hpp"
#include "kronload/partitions.hpp"

// Published reference values, embedded verbatim at build time from
// data/fixtures/*.csv.
namespace kronload::fixtures {

namespace detail {
const std::map<std::string, std::string_view>& embedded_files();
}

// Raw CSV text of an embedded file by stem; throws DomainError if absent.
std::string_view raw(std::string_view stem);

// Quoted-field CSV rows, header excluded.
std::vector<std::vector<std::string>> rows(std::string_view stem);

struct LoadingRow {
  int n;
  Partition lambda;
  std::string r_text;  // as printed
  std::string b_text;
  double r;
  double b;
};
std::vector<LoadingRow> appendix_a();

struct ThresholdRow {
  int n;
  std::string value_text;
  double value;
  Triple triple;
};
std::vector<ThresholdRow> table1();  // b_star, exhaustive
std::vector<ThresholdRow> table2();  // r_star, exhaustive
std::vector<ThresholdRow> table3();  // r_star, conjectured
std::vector<ThresholdRow> table4();  // b_star, conjectured; triple is (lambda, lambda, lambda)

// Iterates v1..v6, w1, w2, w10..w12 and the final loading vectors r, b.
std::map<std::string, std::vector<double>> section2_example();

struct Example42 {
  Triple n18_triple;
  double n18_b_triple;
  double n18_b_star;
  std::uint64_t n20_total_triples;
  std::uint64_t n20_b_below_count;
  std::uint64_t n20_r_below_count;
  double n20_b_below_percent;
  double n20_r_below_percent;
  double n20_b_star;
  double n20_r_star;
};
Example42 example_4_2();

struct MeanRow {
  int n;
  double r_mean;
  double b_mean;
};
std::vector<MeanRow> section3_means();

}  // namespace kronload::fixtures
