#include "strongtrees/data.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace strongtrees {

namespace {

// RFC 4180 record reader. Returns false on end of input. Accepts both LF
// and CRLF line endings; quoted fields may contain commas, newlines and
// doubled quotes.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::int64_t& line_no) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  while (true) {
    if (c == EOF) {
      if (in_quotes) {
        throw std::runtime_error("csv: unterminated quoted field at line " +
                                 std::to_string(line_no));
      }
      fields.push_back(field);
      return true;
    }
    if (in_quotes) {
      if (c == '"') {
        int next = in.get();
        if (next == '"') {
          field.push_back('"');
        } else {
          in_quotes = false;
          c = next;
          continue;
        }
      } else {
        if (c == '\n') ++line_no;
        field.push_back(static_cast<char>(c));
      }
    } else if (c == '"' && field.empty() && !quoted_field) {
      in_quotes = true;
      quoted_field = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
      quoted_field = false;
    } else if (c == '\r') {
      int next = in.get();
      if (next == '\n' || next == EOF) {
        ++line_no;
        fields.push_back(field);
        return true;
      }
      field.push_back('\r');
      c = next;
      continue;
    } else if (c == '\n') {
      ++line_no;
      fields.push_back(field);
      return true;
    } else {
      field.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

void write_csv_field(std::ostream& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

Dataset Dataset::from_string_rows(
    const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows) {
  if (header.empty()) {
    throw std::runtime_error("dataset: header must name at least one variable");
  }
  if (rows.empty()) {
    throw std::runtime_error("dataset: no data rows");
  }
  Dataset ds;
  const int m = static_cast<int>(header.size());
  ds.vars_.resize(m);
  std::vector<std::unordered_map<std::string, int>> code(m);
  for (int v = 0; v < m; ++v) ds.vars_[v].name = header[v];

  ds.rows_.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (static_cast<int>(row.size()) != m) {
      throw std::runtime_error("dataset: row " + std::to_string(r + 1) +
                               " has " + std::to_string(row.size()) +
                               " cells, expected " + std::to_string(m));
    }
    std::vector<int> coded(m);
    for (int v = 0; v < m; ++v) {
      if (row[v].empty()) {
        throw std::runtime_error("dataset: empty cell in row " +
                                 std::to_string(r + 1) + ", column '" +
                                 header[v] + "'");
      }
      auto [it, inserted] =
          code[v].emplace(row[v], static_cast<int>(code[v].size()));
      if (inserted) ds.vars_[v].categories.push_back(row[v]);
      coded[v] = it->second;
    }
    ds.rows_.push_back(std::move(coded));
  }
  return ds;
}

Dataset Dataset::from_csv(std::istream& in) {
  std::vector<std::string> header;
  std::int64_t line_no = 1;
  if (!read_csv_record(in, header, line_no)) {
    throw std::runtime_error("csv: empty input");
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> record;
  while (read_csv_record(in, record, line_no)) {
    if (record.size() == 1 && record[0].empty()) continue;  // trailing blank
    rows.push_back(record);
  }
  return from_string_rows(header, rows);
}

Dataset Dataset::from_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return from_csv(in);
}

void Dataset::to_csv(std::ostream& out) const {
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    if (v) out << ',';
    write_csv_field(out, vars_[v].name);
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (v) out << ',';
      write_csv_field(out, vars_[v].categories[row[v]]);
    }
    out << '\n';
  }
}

ContingencyTable ContingencyTable::zeros(std::vector<int> shape) {
  ContingencyTable t;
  std::int64_t cells = 1;
  for (int d : shape) {
    if (d < 1) throw std::invalid_argument("contingency table: arity must be >= 1");
    cells *= d;
  }
  t.shape = std::move(shape);
  t.counts.assign(cells, 0);
  t.n = 0;
  return t;
}

ContingencyTable ContingencyTable::marginal(int axis) const {
  if (axis < 0 || axis >= dims()) {
    throw std::invalid_argument("marginal: axis out of range");
  }
  ContingencyTable out = zeros({shape[axis]});
  std::int64_t stride = 1;
  for (int a = axis + 1; a < dims(); ++a) stride *= shape[a];
  for (std::int64_t idx = 0; idx < cell_count(); ++idx) {
    out.counts[(idx / stride) % shape[axis]] += counts[idx];
  }
  out.n = n;
  return out;
}

ContingencyTable ContingencyTable::pair_marginal(int axis0, int axis1) const {
  if (dims() != 3) {
    throw std::invalid_argument("pair_marginal: table must be 3-d");
  }
  if (axis0 == axis1 || axis0 < 0 || axis1 < 0 || axis0 > 2 || axis1 > 2) {
    throw std::invalid_argument("pair_marginal: bad axes");
  }
  ContingencyTable out = zeros({shape[axis0], shape[axis1]});
  int idx[3];
  for (idx[0] = 0; idx[0] < shape[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < shape[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < shape[2]; ++idx[2]) {
        out.at(idx[axis0], idx[axis1]) += at(idx[0], idx[1], idx[2]);
      }
    }
  }
  out.n = n;
  return out;
}

ContingencyTable single_counts(const Dataset& ds, int a) {
  if (a < 0 || a >= ds.variable_count()) {
    throw std::invalid_argument("single_counts: variable index out of range");
  }
  ContingencyTable t = ContingencyTable::zeros({ds.variable(a).arity()});
  for (std::int64_t r = 0; r < ds.row_count(); ++r) t.at(ds.value(r, a))++;
  t.n = ds.row_count();
  return t;
}

ContingencyTable pair_counts(const Dataset& ds, int a, int b) {
  if (a == b) {
    throw std::invalid_argument("pair_counts: variables must be distinct");
  }
  if (a < 0 || b < 0 || a >= ds.variable_count() || b >= ds.variable_count()) {
    throw std::invalid_argument("pair_counts: variable index out of range");
  }
  ContingencyTable t =
      ContingencyTable::zeros({ds.variable(a).arity(), ds.variable(b).arity()});
  for (std::int64_t r = 0; r < ds.row_count(); ++r) {
    t.at(ds.value(r, a), ds.value(r, b))++;
  }
  t.n = ds.row_count();
  return t;
}

ContingencyTable triple_counts(const Dataset& ds, int a, int b, int c) {
  if (a == b || a == c || b == c) {
    throw std::invalid_argument("triple_counts: variables must be distinct");
  }
  if (a < 0 || b < 0 || c < 0 || a >= ds.variable_count() ||
      b >= ds.variable_count() || c >= ds.variable_count()) {
    throw std::invalid_argument("triple_counts: variable index out of range");
  }
  ContingencyTable t = ContingencyTable::zeros({ds.variable(a).arity(),
                                                ds.variable(b).arity(),
                                                ds.variable(c).arity()});
  for (std::int64_t r = 0; r < ds.row_count(); ++r) {
    t.at(ds.value(r, a), ds.value(r, b), ds.value(r, c))++;
  }
  t.n = ds.row_count();
  return t;
}

}  // namespace strongtrees
