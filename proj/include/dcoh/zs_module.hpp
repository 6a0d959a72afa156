#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace dcoh {

/// Integer polynomial in s, coefficients low degree first, no trailing zeros.
using ZPoly = std::vector<mpz_class>;
/// Element of Z[s]^r.
using ZVec = std::vector<ZPoly>;

ZPoly zpoly_from(const std::vector<long>& c);
std::string zpoly_str(const ZPoly& p);

/// Strong Gröbner basis of the submodule of Z[s]^r spanned by gens, position-over-term
/// order with lower positions dominant.
std::vector<ZVec> strong_groebner(std::vector<ZVec> gens);

/// Generators of {c ∈ Z[s]^m : Σ c_i v_i = 0} for v_1..v_m ∈ Z[s]^n.
std::vector<ZVec> syzygies(const std::vector<ZVec>& v);

/// Whether w lies in the span of gens (reduction by a strong Gröbner basis).
bool in_submodule(const std::vector<ZVec>& groebner, const ZVec& w);

}  // namespace dcoh
