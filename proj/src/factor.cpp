#include "probact/factor.hpp"

#include <algorithm>
#include <span>

#include "probact/kernels.hpp"

namespace probact {

bool Factor::contains(const std::string& var) const {
  return std::find(scope.begin(), scope.end(), var) != scope.end();
}

std::size_t Factor::position(const std::string& var) const {
  const auto it = std::find(scope.begin(), scope.end(), var);
  if (it == scope.end())
    throw ModelError("factor has no variable '" + var + "'");
  return static_cast<std::size_t>(it - scope.begin());
}

std::size_t Factor::stride_of(std::size_t pos) const {
  std::size_t s = 1;
  for (std::size_t i = pos + 1; i < card.size(); ++i) s *= card[i];
  return s;
}

Factor unit_factor() { return Factor{{}, {}, {1.0}}; }

Factor factor_from_cpt(const BeliefNetwork& bn, const Cpt& cpt) {
  Factor f;
  std::size_t rows = 1;
  for (const std::string& p : cpt.parents) {
    const Distinction* d = find_node(bn, p);
    if (d == nullptr)
      throw ModelError("table for '" + cpt.child +
                       "' conditions on unknown node '" + p + "'");
    f.scope.push_back(p);
    f.card.push_back(d->domain.size());
    rows *= d->domain.size();
  }
  const Distinction* child = find_node(bn, cpt.child);
  if (child == nullptr)
    throw ModelError("table for unknown node '" + cpt.child + "'");
  f.scope.push_back(cpt.child);
  f.card.push_back(child->domain.size());
  if (cpt.rows.size() != rows)
    throw ModelError("table for '" + cpt.child + "' has a wrong row count");
  f.values.reserve(rows * child->domain.size());
  for (const std::vector<double>& row : cpt.rows) {
    if (row.size() != child->domain.size())
      throw ModelError("table for '" + cpt.child + "' has a wrong row width");
    f.values.insert(f.values.end(), row.begin(), row.end());
  }
  return f;
}

Factor product(const Factor& a, const Factor& b) {
  Factor out;
  out.scope = a.scope;
  out.card = a.card;
  for (std::size_t i = 0; i < b.scope.size(); ++i) {
    if (a.contains(b.scope[i])) {
      if (a.card[a.position(b.scope[i])] != b.card[i])
        throw ModelError("factors disagree on the cardinality of '" +
                         b.scope[i] + "'");
      continue;
    }
    out.scope.push_back(b.scope[i]);
    out.card.push_back(b.card[i]);
  }
  const std::size_t m = out.scope.size();
  if (m == 0) return Factor{{}, {}, {a.values[0] * b.values[0]}};

  std::size_t size = 1;
  for (std::size_t c : out.card) size *= c;
  out.values.resize(size);

  // Stride of each output variable inside a and b; 0 marks absence.
  std::vector<std::size_t> sa(m, 0), sb(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    if (a.contains(out.scope[j])) sa[j] = a.stride_of(a.position(out.scope[j]));
    if (b.contains(out.scope[j])) sb[j] = b.stride_of(b.position(out.scope[j]));
  }

  const std::size_t last = m - 1;
  const std::size_t blk = out.card[last];
  std::vector<std::size_t> digit(m, 0);
  std::size_t a_base = 0, b_base = 0, written = 0;
  for (;;) {
    double* dst = out.values.data() + written;
    if (sa[last] == 1 && sb[last] == 1) {
      kern::mul({dst, blk}, {a.values.data() + a_base, blk},
                {b.values.data() + b_base, blk});
    } else if (sa[last] == 1 && sb[last] == 0) {
      kern::mul_scalar({dst, blk}, {a.values.data() + a_base, blk},
                       b.values[b_base]);
    } else if (sa[last] == 0 && sb[last] == 1) {
      kern::mul_scalar({dst, blk}, {b.values.data() + b_base, blk},
                       a.values[a_base]);
    } else {
      std::size_t ai = a_base, bi = b_base;
      for (std::size_t v = 0; v < blk; ++v) {
        dst[v] = a.values[ai] * b.values[bi];
        ai += sa[last];
        bi += sb[last];
      }
    }
    written += blk;
    if (written == size) break;
    for (std::size_t j = last; j-- > 0;) {
      if (++digit[j] < out.card[j]) {
        a_base += sa[j];
        b_base += sb[j];
        break;
      }
      digit[j] = 0;
      a_base -= (out.card[j] - 1) * sa[j];
      b_base -= (out.card[j] - 1) * sb[j];
    }
  }
  return out;
}

Factor marginalize(const Factor& f, const std::string& var) {
  const std::size_t pos = f.position(var);
  const std::size_t stride = f.stride_of(pos);
  const std::size_t cv = f.card[pos];
  Factor out;
  out.scope = f.scope;
  out.card = f.card;
  out.scope.erase(out.scope.begin() + static_cast<std::ptrdiff_t>(pos));
  out.card.erase(out.card.begin() + static_cast<std::ptrdiff_t>(pos));
  out.values.resize(f.values.size() / cv);
  if (stride == 1) {
    for (std::size_t r = 0; r < out.values.size(); ++r)
      out.values[r] = kern::sum({f.values.data() + r * cv, cv});
    return out;
  }
  const std::size_t outer = f.values.size() / (cv * stride);
  for (std::size_t o = 0; o < outer; ++o) {
    double* dst = out.values.data() + o * stride;
    const double* src = f.values.data() + o * cv * stride;
    std::copy(src, src + stride, dst);
    for (std::size_t v = 1; v < cv; ++v)
      kern::add({dst, stride}, {src + v * stride, stride});
  }
  return out;
}

Factor reduce(const Factor& f, const std::string& var,
              std::size_t value_index) {
  const std::size_t pos = f.position(var);
  const std::size_t stride = f.stride_of(pos);
  const std::size_t cv = f.card[pos];
  if (value_index >= cv)
    throw ModelError("value index out of range for '" + var + "'");
  Factor out;
  out.scope = f.scope;
  out.card = f.card;
  out.scope.erase(out.scope.begin() + static_cast<std::ptrdiff_t>(pos));
  out.card.erase(out.card.begin() + static_cast<std::ptrdiff_t>(pos));
  out.values.resize(f.values.size() / cv);
  const std::size_t outer = f.values.size() / (cv * stride);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = f.values.data() + (o * cv + value_index) * stride;
    std::copy(src, src + stride, out.values.data() + o * stride);
  }
  return out;
}

Factor transposed(const Factor& f, const std::vector<std::string>& new_scope) {
  const std::size_t m = f.scope.size();
  if (new_scope.size() != m)
    throw ModelError("transpose scope is not a permutation");
  Factor out;
  out.scope = new_scope;
  out.card.resize(m);
  std::vector<std::size_t> stride_in(m);
  std::vector<char> used(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t p = f.position(new_scope[j]);
    if (used[p]) throw ModelError("transpose scope is not a permutation");
    used[p] = 1;
    out.card[j] = f.card[p];
    stride_in[j] = f.stride_of(p);
  }
  out.values.resize(f.values.size());
  if (m == 0) {
    out.values = f.values;
    return out;
  }
  std::vector<std::size_t> digit(m, 0);
  std::size_t in_idx = 0;
  for (std::size_t w = 0; w < out.values.size(); ++w) {
    out.values[w] = f.values[in_idx];
    for (std::size_t j = m; j-- > 0;) {
      if (++digit[j] < out.card[j]) {
        in_idx += stride_in[j];
        break;
      }
      digit[j] = 0;
      in_idx -= (out.card[j] - 1) * stride_in[j];
    }
  }
  return out;
}

double total_mass(const Factor& f) { return kern::sum(f.values); }

void normalize_in_place(Factor& f) {
  const double mass = total_mass(f);
  if (!(mass > 0.0))
    throw ZeroEvidenceError("distribution has zero total mass");
  // Divide rather than scale by the reciprocal so a sole surviving cell
  // normalizes to exactly one.
  for (double& v : f.values) v /= mass;
}

}  // namespace probact
