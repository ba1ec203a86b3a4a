#ifndef STRONGTREES_DATA_HPP
#define STRONGTREES_DATA_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace strongtrees {

struct Variable {
  std::string name;
  std::vector<std::string> categories;  // index = category code

  int arity() const { return static_cast<int>(categories.size()); }
};

// An immutable complete-data sample over categorical variables.
// Category codes are assigned per column in order of first appearance.
class Dataset {
 public:
  // Reads RFC 4180 CSV: header row of variable names, then one row per
  // observation. Every cell must be nonempty; ragged rows and header-only
  // input are rejected.
  static Dataset from_csv(std::istream& in);
  static Dataset from_csv_file(const std::string& path);

  // Tabulates pre-split string rows with the same coding rule as from_csv.
  static Dataset from_string_rows(
      const std::vector<std::string>& header,
      const std::vector<std::vector<std::string>>& rows);

  int variable_count() const { return static_cast<int>(vars_.size()); }
  std::int64_t row_count() const {
    return static_cast<std::int64_t>(rows_.size());
  }
  const Variable& variable(int v) const { return vars_.at(v); }
  const std::vector<Variable>& variables() const { return vars_; }
  int value(std::int64_t row, int var) const { return rows_[row][var]; }

  void to_csv(std::ostream& out) const;

 private:
  std::vector<Variable> vars_;
  std::vector<std::vector<int>> rows_;  // rows_[r][v] = category code
};

// Integer co-occurrence counts over 1, 2 or 3 variables, row-major.
struct ContingencyTable {
  std::vector<int> shape;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  int dims() const { return static_cast<int>(shape.size()); }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(counts.size());
  }

  std::int64_t& at(int i) { return counts[i]; }
  std::int64_t at(int i) const { return counts[i]; }
  std::int64_t& at(int i, int j) { return counts[i * shape[1] + j]; }
  std::int64_t at(int i, int j) const { return counts[i * shape[1] + j]; }
  std::int64_t& at(int i, int j, int k) {
    return counts[(i * shape[1] + j) * shape[2] + k];
  }
  std::int64_t at(int i, int j, int k) const {
    return counts[(i * shape[1] + j) * shape[2] + k];
  }

  // Sums out all axes except `axis`.
  ContingencyTable marginal(int axis) const;
  // Sums out the remaining axis of a 3-d table, keeping (axis0, axis1)
  // in that order.
  ContingencyTable pair_marginal(int axis0, int axis1) const;

  static ContingencyTable zeros(std::vector<int> shape);
};

ContingencyTable single_counts(const Dataset& ds, int a);
ContingencyTable pair_counts(const Dataset& ds, int a, int b);
ContingencyTable triple_counts(const Dataset& ds, int a, int b, int c);

}  // namespace strongtrees

#endif  // STRONGTREES_DATA_HPP
