#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "dimpol/errors.hpp"

namespace dimpol {

/// Exact rational number used for dimension exponents.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

/// base raised to an exact rational exponent. Negative bases are supported
/// for integer exponents only; anything else yields NaN and is rejected by
/// the transform constructors.
double rational_pow(double base, const Rational& exponent);

/// Exponent vector over the fundamental dimension basis (mass, length, time).
/// The zero vector denotes a dimensionless quantity. Equality is exact.
class DimVec {
  public:
    static constexpr std::size_t kBasisSize = 3;
    static constexpr const char* kBasisNames[kBasisSize] = {"M", "L", "T"};

    DimVec() = default;
    DimVec(Rational mass, Rational length, Rational time)
        : exponents_{mass, length, time} {}

    static DimVec dimensionless() { return DimVec{}; }
    static DimVec of(int mass, int length, int time) {
        return DimVec{Rational(mass), Rational(length), Rational(time)};
    }

    const Rational& operator[](std::size_t i) const { return exponents_[i]; }

    bool is_dimensionless() const {
        for (const auto& e : exponents_)
            if (e != Rational(0)) return false;
        return true;
    }

    /// Dimensions compose multiplicatively, so exponents add.
    DimVec operator*(const DimVec& o) const {
        return DimVec{exponents_[0] + o.exponents_[0], exponents_[1] + o.exponents_[1],
                      exponents_[2] + o.exponents_[2]};
    }
    DimVec operator/(const DimVec& o) const {
        return DimVec{exponents_[0] - o.exponents_[0], exponents_[1] - o.exponents_[1],
                      exponents_[2] - o.exponents_[2]};
    }
    DimVec pow(const Rational& p) const {
        return DimVec{exponents_[0] * p, exponents_[1] * p, exponents_[2] * p};
    }

    friend bool operator==(const DimVec&, const DimVec&) = default;

    std::string str() const;

  private:
    std::array<Rational, kBasisSize> exponents_{};
};

enum class Role { input, state, context };

/// One named quantity of the control problem and its unit signature.
struct QuantitySpec {
    std::string name;
    DimVec dim;
    Role role = Role::context;
};

/// Declares the inputs, states and context variables of a motion control
/// problem, plus the ordered choice of repeated context variables that act
/// as the dimensional basis.
struct ProblemSignature {
    std::string name;
    std::vector<QuantitySpec> inputs;
    std::vector<QuantitySpec> states;
    std::vector<QuantitySpec> context;
    std::vector<std::string> repeated;

    std::size_t input_count() const { return inputs.size(); }
    std::size_t state_count() const { return states.size(); }
    std::size_t context_count() const { return context.size(); }
    std::size_t repeated_count() const { return repeated.size(); }

    /// Positions of the repeated variables within `context`, in `repeated` order.
    std::vector<std::size_t> repeated_indices() const;
    /// Positions of the non-repeated context variables, in declaration order.
    std::vector<std::size_t> free_context_indices() const;

    /// Checks name uniqueness, role consistency, and that the repeated
    /// variables span an independent dimensional basis of full rank.
    void validate() const;
};

using RationalRow = std::vector<Rational>;
using RationalMatrix = std::vector<RationalRow>;

/// Exponents that make each quantity dimensionless when multiplied by the
/// repeated variables raised to the row entries. Rows follow declaration
/// order; columns follow the `repeated` order of the signature.
struct PiGroupSet {
    RationalMatrix input_exponents;    // k x d
    RationalMatrix state_exponents;    // n x d
    RationalMatrix context_exponents;  // (m - d) x d
};

/// Solves the exact linear system for every non-repeated quantity.
/// Throws RankDeficient or UnreachableDimension.
PiGroupSet solve_pi_exponents(const ProblemSignature& sig);

/// Diagonal scale factors evaluated at a concrete context instance: input,
/// state and free-context quantities are multiplied by these to become
/// dimensionless.
struct ScalingTransforms {
    std::string signature_name;
    std::vector<double> t_u;           // k input scales
    std::vector<double> t_x;           // n state scales
    std::vector<double> t_c;           // m - d free-context scales
    std::vector<double> context;       // the m context values used
    std::vector<double> context_star;  // t_c applied to the free context values
    std::vector<std::size_t> free_context;  // indices of the free context entries
};

/// Evaluates every scale factor as the product of repeated-variable values
/// raised to the solved exponents. Throws ZeroRepeatedVariable, or Error if
/// a factor comes out non-finite or zero.
ScalingTransforms build_transforms(const ProblemSignature& sig, const PiGroupSet& pi,
                                   std::span<const double> context_values);

/// Convenience: solve the exponents and build transforms in one call.
ScalingTransforms transforms_for(const ProblemSignature& sig,
                                 std::span<const double> context_values);

/// The dimensionless context c* of a transform set.
std::vector<double> dimensionless_context(const ScalingTransforms& st);

/// Entry comparison rule shared by all similarity checks: relative tolerance,
/// falling back to absolute tolerance when both magnitudes are below one.
bool scalars_close(double x, double y, double tol);

/// True iff the dimensionless contexts agree entrywise under scalars_close.
/// Throws SignatureMismatch when the transforms come from different signatures.
bool is_similar(const ScalingTransforms& a, const ScalingTransforms& b, double rel_tol);

}  // namespace dimpol
