#include "fbounds/boolfn.hpp"

#include <algorithm>
#include <numeric>

#include "fbounds/errors.hpp"

namespace fbounds {
namespace {

void check_arity(int arity, int arity_cap) {
  if (arity < 1) throw ArgumentError("arity must be >= 1, got " + std::to_string(arity));
  if (arity > arity_cap || arity > 32)
    throw CapacityError("arity " + std::to_string(arity) + " exceeds cap " +
                        std::to_string(std::min(arity_cap, 32)));
}

std::size_t word_count(int arity) { return ((std::size_t{1} << arity) + 63) / 64; }

std::uint64_t tail_mask(int arity) {
  return arity >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::uint64_t{1} << arity)) - 1);
}

// In-place unnormalized Walsh-Hadamard butterfly: out[S] = sum_u in[u] chi_S(u).
// With u_j = +1 <=> bit set, the pair (lo = bit clear, hi = bit set) maps to
// (hi + lo, hi - lo) for the S-without-j / S-with-j slots.
template <typename T>
void walsh_hadamard(std::vector<T>& a) {
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        T lo = a[j];
        T hi = a[j + len];
        a[j] = hi + lo;
        a[j + len] = hi - lo;
      }
    }
  }
}

// Inverse butterfly: v(u) = sum_S c[S] chi_S(u). Pair (S without j, S with j)
// maps to u with bit clear: c0 - c1, bit set: c0 + c1.
template <typename T>
void inverse_walsh_hadamard(std::vector<T>& a) {
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        T without = a[j];
        T with = a[j + len];
        a[j] = without - with;
        a[j + len] = without + with;
      }
    }
  }
}

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw ArgumentError("table length " + std::to_string(n) + " is not a power of two");
  return __builtin_ctzll(n);
}

}  // namespace

std::vector<int> assignment_of(std::uint64_t index, int arity) {
  std::vector<int> u(static_cast<std::size_t>(arity));
  for (int j = 0; j < arity; ++j) u[j] = ((index >> j) & 1) ? 1 : -1;
  return u;
}

std::uint64_t index_of(std::span<const int> u) {
  if (u.size() > 63) throw ArgumentError("sign vector too long");
  std::uint64_t index = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 1)
      index |= std::uint64_t{1} << j;
    else if (u[j] != -1)
      throw ArgumentError("sign vector entries must be -1 or +1");
  }
  return index;
}

BooleanFunction::BooleanFunction(int arity, std::vector<std::uint64_t> words, std::string name)
    : arity_(arity), name_(std::move(name)) {
  check_arity(arity, 32);
  if (words.size() != word_count(arity))
    throw ArgumentError("table for arity " + std::to_string(arity) + " needs " +
                        std::to_string(word_count(arity)) + " words");
  if ((words.back() & ~tail_mask(arity)) != 0) throw ArgumentError("table has bits past 2^arity");
  words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
}

BooleanFunction BooleanFunction::from_predicate(int arity,
                                                const std::function<bool(std::uint64_t)>& pred,
                                                std::string name, int arity_cap) {
  check_arity(arity, arity_cap);
  std::vector<std::uint64_t> words(word_count(arity), 0);
  const std::uint64_t n = std::uint64_t{1} << arity;
  for (std::uint64_t i = 0; i < n; ++i)
    if (pred(i)) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  return BooleanFunction(arity, std::move(words), std::move(name));
}

BooleanFunction BooleanFunction::with_name(std::string name) const {
  BooleanFunction copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

bool BooleanFunction::eval(std::span<const int> u) const {
  if (u.size() != static_cast<std::size_t>(arity_))
    throw ArgumentError("expected a sign vector of length " + std::to_string(arity_) + ", got " +
                        std::to_string(u.size()));
  return (*this)[index_of(u)];
}

std::uint64_t BooleanFunction::popcount() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : *words_) total += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return total;
}

std::vector<std::uint64_t> BooleanFunction::solutions() const {
  std::vector<std::uint64_t> out;
  out.reserve(popcount());
  const auto& words = *words_;
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1)
      out.push_back((w << 6) | static_cast<std::uint64_t>(__builtin_ctzll(bits)));
  }
  return out;
}

std::string BooleanFunction::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::uint64_t digits = std::max<std::uint64_t>(1, size() / 4);
  std::string out;
  out.reserve(digits);
  for (std::uint64_t d = digits; d-- > 0;) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t i = d * 4 + b;
      if (i < size() && (*this)[i]) nibble |= 1u << b;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

Rational FourierSpectrum::norm_sq() const {
  Rational total = 0;
  for (const auto& c : coeffs) total += c * c;
  return total;
}

std::vector<Rational> FourierSpectrum::first_order() const {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(arity));
  for (int j = 0; j < arity; ++j) out.push_back(coeffs[std::uint64_t{1} << j]);
  return out;
}

Rational WeightFunction::norm_sq() const {
  Rational total = 0;
  for (const auto& v : values) total += v * v;
  return total * scale_sq / pow2(arity);
}

bool WeightFunction::supported_on(const BooleanFunction& f) const {
  if (f.arity() != arity) return false;
  for (std::uint64_t i = 0; i < values.size(); ++i)
    if (!f[i] && values[i] != 0) return false;
  return true;
}

FourierSpectrum transform(const BooleanFunction& f) {
  std::vector<std::int64_t> a(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) a[i] = f[i] ? 1 : 0;
  walsh_hadamard(a);
  FourierSpectrum out;
  out.arity = f.arity();
  out.coeffs.reserve(a.size());
  const Integer denom = Integer(1) << static_cast<unsigned>(f.arity());
  for (std::int64_t v : a) {
    Rational c(Integer(static_cast<long>(v)), denom);
    c.canonicalize();
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

FourierSpectrum transform(std::span<const Rational> values) {
  const int arity = log2_exact(values.size());
  // Bring the table to a common denominator so the butterfly runs on integers.
  Integer common = 1;
  for (const auto& v : values) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_den_mpz_t());
  std::vector<Integer> a;
  a.reserve(values.size());
  for (const auto& v : values) a.push_back(Integer(v.get_num()) * (common / Integer(v.get_den())));
  walsh_hadamard(a);
  FourierSpectrum out;
  out.arity = arity;
  out.coeffs.reserve(a.size());
  const Integer denom = common << static_cast<unsigned>(arity);
  for (auto& v : a) {
    Rational c(v, denom);
    c.canonicalize();
    out.coeffs.push_back(std::move(c));
  }
  return out;
}

std::vector<Rational> inverse_transform(const FourierSpectrum& spectrum) {
  if (spectrum.coeffs.size() != (std::size_t{1} << spectrum.arity))
    throw ArgumentError("spectrum length does not match its arity");
  std::vector<Rational> a = spectrum.coeffs;
  inverse_walsh_hadamard(a);
  for (auto& v : a) v.canonicalize();
  return a;
}

WeightFunction weight_from_function(const BooleanFunction& f) {
  std::vector<Rational> values(f.size());
  for (std::uint64_t i = 0; i < f.size(); ++i) values[i] = f[i] ? 1 : 0;
  WeightFunction w;
  w.arity = f.arity();
  w.values = std::move(values);
  w.spectrum = transform(f);
  return w;
}

WeightFunction make_weight(std::vector<Rational> values, Rational scale_sq) {
  if (scale_sq < 0) throw ArgumentError("weight scale must be non-negative");
  WeightFunction w;
  w.spectrum = transform(values);
  w.arity = w.spectrum.arity;
  w.values = std::move(values);
  w.scale_sq = std::move(scale_sq);
  return w;
}

BooleanFunction compose(const BooleanFunction& outer, std::span<const BooleanFunction> inners,
                        int arity_cap) {
  if (inners.empty()) throw ArgumentError("compose needs at least one inner function");
  if (static_cast<int>(inners.size()) != outer.arity())
    throw ArgumentError("outer arity " + std::to_string(outer.arity()) + " but " +
                        std::to_string(inners.size()) + " inner functions");
  int total = 0;
  for (const auto& g : inners) total += g.arity();
  check_arity(total, arity_cap);

  std::vector<int> offsets;
  int offset = 0;
  for (const auto& g : inners) {
    offsets.push_back(offset);
    offset += g.arity();
  }
  std::string name = (outer.name().empty() ? "f" : outer.name()) + "(";
  for (std::size_t b = 0; b < inners.size(); ++b)
    name += (b ? "," : "") + (inners[b].name().empty() ? std::string("g") : inners[b].name());
  name += ")";
  return BooleanFunction::from_predicate(
      total,
      [&](std::uint64_t index) {
        std::uint64_t outer_index = 0;
        for (std::size_t b = 0; b < inners.size(); ++b) {
          const std::uint64_t block =
              (index >> offsets[b]) & ((std::uint64_t{1} << inners[b].arity()) - 1);
          if (inners[b][block]) outer_index |= std::uint64_t{1} << b;
        }
        return outer[outer_index];
      },
      std::move(name), arity_cap);
}

namespace {

void expect_params(std::string_view family, std::span<const int> params, std::size_t lo,
                   std::size_t hi) {
  if (params.size() < lo || params.size() > hi)
    throw ArgumentError(std::string(family) + " takes " + std::to_string(lo) +
                        (hi > lo ? "-" + std::to_string(hi) : std::string()) + " parameter(s)");
  for (int p : params)
    if (p < 0) throw ArgumentError(std::string(family) + " parameters must be non-negative");
}

int positive(std::string_view family, int v) {
  if (v < 1) throw ArgumentError(std::string(family) + " parameters must be >= 1");
  return v;
}

int checked_product(int a, int b, int arity_cap) {
  const long long total = static_cast<long long>(a) * b;
  if (total > arity_cap) throw CapacityError("arity " + std::to_string(total) + " exceeds cap " + std::to_string(arity_cap));
  return static_cast<int>(total);
}

std::string label(std::string_view family, std::span<const int> params) {
  std::string out(family);
  for (std::size_t i = 0; i < params.size(); ++i)
    out += (i ? "," : ":") + std::to_string(params[i]);
  return out;
}

}  // namespace

bool is_builtin_family(std::string_view family) {
  static constexpr std::string_view kFamilies[] = {"ksat",   "xorsat", "naesat", "majority",
                                                   "mod3",   "and",    "or",     "const",
                                                   "majmaj", "orxor",  "tribes"};
  return std::find(std::begin(kFamilies), std::end(kFamilies), family) != std::end(kFamilies);
}

BooleanFunction builtin(std::string_view family, std::span<const int> params, int arity_cap) {
  const std::string name = label(family, params);
  auto make = [&](int arity, auto pred) {
    return BooleanFunction::from_predicate(arity, pred, name, arity_cap);
  };
  auto ones = [](std::uint64_t i) { return __builtin_popcountll(i); };

  if (family == "ksat" || family == "or") {
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    return make(k, [](std::uint64_t i) { return i != 0; });
  }
  if (family == "and") {
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    const std::uint64_t all = (std::uint64_t{1} << std::min(k, 63)) - 1;
    return make(k, [all](std::uint64_t i) { return i == all; });
  }
  if (family == "xorsat") {
    // f = 1 iff chi_[k](u) = -1, i.e. an odd number of -1 entries.
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    return make(k, [k, ones](std::uint64_t i) { return ((k - ones(i)) & 1) == 1; });
  }
  if (family == "naesat") {
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    return make(k, [k, ones](std::uint64_t i) { return ones(i) != 0 && ones(i) != k; });
  }
  if (family == "majority") {
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    if (k % 2 == 0) throw ArgumentError("majority needs odd arity, got " + std::to_string(k));
    return make(k, [k, ones](std::uint64_t i) { return 2 * ones(i) > k; });
  }
  if (family == "mod3") {
    // Counts +1 entries; zero of them counts as divisible.
    expect_params(family, params, 1, 1);
    const int k = positive(family, params[0]);
    return make(k, [ones](std::uint64_t i) { return ones(i) % 3 == 0; });
  }
  if (family == "const") {
    expect_params(family, params, 1, 2);
    const int k = positive(family, params[0]);
    const int v = params.size() > 1 ? params[1] : 1;
    if (v != 0 && v != 1) throw ArgumentError("const value must be 0 or 1");
    return make(k, [v](std::uint64_t) { return v == 1; });
  }
  if (family == "majmaj") {
    expect_params(family, params, 1, 1);
    const int a = positive(family, params[0]);
    if (a % 2 == 0) throw ArgumentError("majmaj needs odd a, got " + std::to_string(a));
    const int k = checked_product(a, 3, arity_cap);
    return make(k, [a](std::uint64_t i) {
      int votes = 0;
      for (int g = 0; g < a; ++g) votes += __builtin_popcountll((i >> (3 * g)) & 7) >= 2;
      return 2 * votes > a;
    });
  }
  if (family == "orxor" || family == "tribes") {
    expect_params(family, params, 2, 2);
    const int a = positive(family, params[0]);
    const int b = positive(family, params[1]);
    const int k = checked_product(a, b, arity_cap);
    const std::uint64_t group = (std::uint64_t{1} << a) - 1;
    if (family == "orxor") {
      // XOR over a group is true iff an odd number of its entries are +1.
      return make(k, [a, b, group](std::uint64_t i) {
        for (int g = 0; g < b; ++g)
          if (__builtin_popcountll((i >> (a * g)) & group) & 1) return true;
        return false;
      });
    }
    return make(k, [a, b, group](std::uint64_t i) {
      for (int g = 0; g < b; ++g)
        if (((i >> (a * g)) & group) == group) return true;
      return false;
    });
  }
  throw ArgumentError("unknown function family '" + std::string(family) + "'");
}

}  // namespace fbounds
