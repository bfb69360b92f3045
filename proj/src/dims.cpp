#include "dimpol/dims.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dimpol {

double rational_pow(double base, const Rational& exponent) {
    if (exponent.numerator() == 0) return 1.0;
    if (exponent.denominator() == 1)
        return std::pow(base, static_cast<double>(exponent.numerator()));
    return std::pow(base, to_double(exponent));
}

std::string DimVec::str() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (std::size_t i = 0; i < kBasisSize; ++i) {
        if (exponents_[i] == Rational(0)) continue;
        if (!first) os << " ";
        os << kBasisNames[i] << "^" << exponents_[i].numerator();
        if (exponents_[i].denominator() != 1) os << "/" << exponents_[i].denominator();
        first = false;
    }
    os << "]";
    return os.str();
}

namespace {

// Gauss-Jordan elimination in exact rational arithmetic; returns the rank.
std::size_t reduce(RationalMatrix& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == Rational(0)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == Rational(0)) continue;
            const Rational f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < cols; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

std::size_t dimension_rank(const std::vector<DimVec>& dims) {
    RationalMatrix rows;
    rows.reserve(dims.size());
    for (const auto& d : dims) {
        RationalRow row(DimVec::kBasisSize);
        for (std::size_t i = 0; i < DimVec::kBasisSize; ++i) row[i] = d[i];
        rows.push_back(std::move(row));
    }
    return reduce(rows);
}

// Exact exponents e such that dim * prod_j repeated[j]^e[j] is dimensionless.
RationalRow solve_exponents(const std::vector<DimVec>& repeated, const DimVec& dim,
                            const std::string& quantity_name) {
    const std::size_t d = repeated.size();
    // One equation per fundamental dimension: sum_j e_j r_j[i] = -dim[i].
    RationalMatrix rows(DimVec::kBasisSize, RationalRow(d + 1));
    for (std::size_t i = 0; i < DimVec::kBasisSize; ++i) {
        for (std::size_t j = 0; j < d; ++j) rows[i][j] = repeated[j][i];
        rows[i][d] = -dim[i];
    }
    reduce(rows);

    RationalRow solution(d, Rational(0));
    std::vector<bool> pivoted(d, false);
    for (const auto& row : rows) {
        std::size_t lead = d + 1;
        for (std::size_t c = 0; c < d; ++c) {
            if (row[c] != Rational(0)) {
                lead = c;
                break;
            }
        }
        if (lead == d + 1) {
            if (row[d] != Rational(0))
                throw UnreachableDimension("quantity '" + quantity_name +
                                           "' uses a fundamental dimension the repeated "
                                           "variables cannot cancel");
            continue;
        }
        solution[lead] = row[d] / row[lead];
        pivoted[lead] = true;
    }
    for (std::size_t j = 0; j < d; ++j) {
        if (!pivoted[j])
            throw RankDeficient("repeated-variable dimension matrix is singular");
    }
    return solution;
}

std::vector<DimVec> repeated_dims(const ProblemSignature& sig) {
    std::vector<DimVec> dims;
    dims.reserve(sig.repeated.size());
    for (std::size_t idx : sig.repeated_indices()) dims.push_back(sig.context[idx].dim);
    return dims;
}

}  // namespace

std::vector<std::size_t> ProblemSignature::repeated_indices() const {
    std::vector<std::size_t> out;
    out.reserve(repeated.size());
    for (const auto& name : repeated) {
        bool found = false;
        for (std::size_t i = 0; i < context.size(); ++i) {
            if (context[i].name == name) {
                out.push_back(i);
                found = true;
                break;
            }
        }
        if (!found)
            throw Error("repeated variable '" + name + "' is not a context variable");
    }
    return out;
}

std::vector<std::size_t> ProblemSignature::free_context_indices() const {
    const auto rep = repeated_indices();
    std::vector<std::size_t> out;
    out.reserve(context.size() - rep.size());
    for (std::size_t i = 0; i < context.size(); ++i) {
        if (std::find(rep.begin(), rep.end(), i) == rep.end()) out.push_back(i);
    }
    return out;
}

void ProblemSignature::validate() const {
    std::set<std::string> names;
    auto check_list = [&](const std::vector<QuantitySpec>& list, Role role) {
        for (const auto& q : list) {
            if (q.name.empty()) throw Error("signature '" + name + "': unnamed quantity");
            if (!names.insert(q.name).second)
                throw Error("signature '" + name + "': duplicate quantity name '" + q.name +
                            "'");
            if (q.role != role)
                throw Error("signature '" + name + "': quantity '" + q.name +
                            "' declared in the wrong role list");
        }
    };
    check_list(inputs, Role::input);
    check_list(states, Role::state);
    check_list(context, Role::context);

    if (repeated.empty()) throw Error("signature '" + name + "': no repeated variables");

    const auto reps = repeated_dims(*this);
    const std::size_t d = reps.size();
    if (dimension_rank(reps) != d)
        throw RankDeficient("signature '" + name +
                            "': repeated-variable dimension matrix is rank deficient");

    // The repeated variables must span every dimension present anywhere.
    std::vector<DimVec> all = reps;
    for (const auto* list : {&inputs, &states, &context})
        for (const auto& q : *list) all.push_back(q.dim);
    if (dimension_rank(all) != d)
        throw UnreachableDimension(
            "signature '" + name +
            "': some quantity uses a fundamental dimension absent from the repeated variables");
}

PiGroupSet solve_pi_exponents(const ProblemSignature& sig) {
    sig.validate();
    const auto reps = repeated_dims(sig);

    PiGroupSet out;
    auto solve_list = [&](const std::vector<QuantitySpec>& list, RationalMatrix& rows) {
        rows.reserve(list.size());
        for (const auto& q : list) rows.push_back(solve_exponents(reps, q.dim, q.name));
    };
    solve_list(sig.inputs, out.input_exponents);
    solve_list(sig.states, out.state_exponents);

    const auto free_idx = sig.free_context_indices();
    out.context_exponents.reserve(free_idx.size());
    for (std::size_t idx : free_idx) {
        const auto& q = sig.context[idx];
        out.context_exponents.push_back(solve_exponents(reps, q.dim, q.name));
    }
    return out;
}

namespace {

double scale_factor(std::span<const double> repeated_values, const RationalRow& exponents) {
    double t = 1.0;
    for (std::size_t j = 0; j < exponents.size(); ++j)
        t *= rational_pow(repeated_values[j], exponents[j]);
    return t;
}

void append_scales(std::span<const double> repeated_values, const RationalMatrix& rows,
                   std::vector<double>& out, const char* what) {
    out.reserve(rows.size());
    for (const auto& row : rows) {
        const double t = scale_factor(repeated_values, row);
        if (!std::isfinite(t) || t == 0.0)
            throw Error(std::string("non-finite or zero ") + what + " scale factor");
        out.push_back(t);
    }
}

}  // namespace

ScalingTransforms build_transforms(const ProblemSignature& sig, const PiGroupSet& pi,
                                   std::span<const double> context_values) {
    if (context_values.size() != sig.context_count())
        throw Error("context vector has length " + std::to_string(context_values.size()) +
                    ", signature '" + sig.name + "' expects " +
                    std::to_string(sig.context_count()));

    const auto rep_idx = sig.repeated_indices();
    std::vector<double> rep_values;
    rep_values.reserve(rep_idx.size());
    for (std::size_t idx : rep_idx) {
        const double v = context_values[idx];
        if (v == 0.0)
            throw ZeroRepeatedVariable("repeated variable '" + sig.context[idx].name +
                                       "' is zero; the scaling is not invertible");
        rep_values.push_back(v);
    }

    ScalingTransforms st;
    st.signature_name = sig.name;
    st.context.assign(context_values.begin(), context_values.end());
    st.free_context = sig.free_context_indices();

    append_scales(rep_values, pi.input_exponents, st.t_u, "input");
    append_scales(rep_values, pi.state_exponents, st.t_x, "state");
    append_scales(rep_values, pi.context_exponents, st.t_c, "context");

    st.context_star.reserve(st.free_context.size());
    for (std::size_t i = 0; i < st.free_context.size(); ++i)
        st.context_star.push_back(st.t_c[i] * context_values[st.free_context[i]]);
    return st;
}

ScalingTransforms transforms_for(const ProblemSignature& sig,
                                 std::span<const double> context_values) {
    return build_transforms(sig, solve_pi_exponents(sig), context_values);
}

std::vector<double> dimensionless_context(const ScalingTransforms& st) {
    return st.context_star;
}

bool scalars_close(double x, double y, double tol) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ax < 1.0 && ay < 1.0) return std::abs(x - y) <= tol;
    return std::abs(x - y) <= tol * std::max(ax, ay);
}

bool is_similar(const ScalingTransforms& a, const ScalingTransforms& b, double rel_tol) {
    if (a.signature_name != b.signature_name ||
        a.context_star.size() != b.context_star.size())
        throw SignatureMismatch("cannot compare transforms of '" + a.signature_name +
                                "' against '" + b.signature_name + "'");
    for (std::size_t i = 0; i < a.context_star.size(); ++i) {
        if (!scalars_close(a.context_star[i], b.context_star[i], rel_tol)) return false;
    }
    return true;
}

}  // namespace dimpol
