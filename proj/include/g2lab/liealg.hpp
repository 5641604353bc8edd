#pragma once

#include "g2lab/kform.hpp"
#include "g2lab/linalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace g2lab {

/// [e_i, e_j] = sum_k c e_k with i < j; `c` is a polynomial in the declared
/// parameters (a constant when the algebra has none).
struct Bracket {
    int i = 0, j = 0, k = 0;
    Poly c;
    bool operator==(const Bracket&) const = default;
};

/// A 7-dimensional real Lie algebra given by structure constants.
///
/// Differential convention: de^k(e_i, e_j) = -e^k([e_i, e_j]), so that
/// [e_1, e_2] = e_2 gives de^2 = -e^12.
class LieAlgebra7 {
public:
    using Params = std::map<std::string, std::optional<Rational>>;

    LieAlgebra7() = default;
    LieAlgebra7(std::string name, std::vector<Bracket> brackets, Params params = {});

    /// Builds the algebra from printed structure equations (de^1, ..., de^7),
    /// each a 2-form literal; parameters appear as "x<name>" atoms.
    static LieAlgebra7 from_structure_equations(std::string name, const std::array<std::string, 7>& de,
                                                Params params = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<Bracket>& brackets() const noexcept { return brackets_; }
    const Params& params() const noexcept { return params_; }

    /// Parameters without a value.
    std::vector<std::string> free_params() const;
    /// Copy with the given parameter values substituted into the brackets.
    LieAlgebra7 with_params(const std::map<std::string, Rational>& values) const;

    /// Structure constants with assigned parameter values substituted.
    Poly constant(int i, int j, int k) const;

    /// de^1..de^7 in the target ring.
    template <class S>
    std::array<KForm<S>, 7> structure_equations() const;

    template <class S>
    Vector7<S> bracket(const Vector7<S>& x, const Vector7<S>& y) const;

    /// Textual structure equations, one 2-form literal per de^i.
    std::array<std::string, 7> structure_equation_strings() const;

    bool operator==(const LieAlgebra7& o) const { return brackets_ == o.brackets_ && params_ == o.params_; }

    /// JSON text in the algebra file format (stable key order).
    std::string to_json() const;
    static LieAlgebra7 from_json(std::string_view text);

private:
    void normalize();

    std::string name_;
    std::vector<Bracket> brackets_;
    Params params_;
};

/// Chevalley-Eilenberg differential, tabulated on every basis form.
template <class S>
class Differential {
public:
    explicit Differential(const LieAlgebra7& algebra);

    const LieAlgebra7& algebra() const noexcept { return algebra_; }
    const KForm<S>& on_basis(Mask m) const { return table_[m]; }
    KForm<S> operator()(const KForm<S>& alpha) const;
    /// Matrix of d : Lambda^k -> Lambda^(k+1) in the lexicographic bases.
    Matrix<S> matrix(int k) const;

private:
    LieAlgebra7 algebra_;
    std::array<KForm<S>, 128> table_;
};

template <class S>
KForm<S> cedifferential(const LieAlgebra7& algebra, const KForm<S>& alpha) {
    return Differential<S>(algebra)(alpha);
}

/// Linearly independent vectors in R^7.
template <class S>
struct Subspace {
    std::vector<Vector7<S>> basis;
    std::size_t dim() const { return basis.size(); }
    Matrix<S> as_columns() const;
};

template <class S>
Subspace<S> coordinate_subspace(std::initializer_list<int> indices) {
    Subspace<S> s;
    for (int i : indices) s.basis.push_back(Vector7<S>::basis(i));
    return s;
}

struct SubspaceCheck {
    bool subalgebra = false;
    bool ideal = false;
};

struct ValidationReport {
    bool jacobi = false;
    /// e^k whose d^2 did not vanish, with the offending 3-form.
    std::vector<std::pair<int, std::string>> jacobi_failures;
    bool unimodular = false;
    /// trace(ad_{e_i}) as strings (polynomials in free parameters).
    std::array<std::string, 7> ad_traces;
    std::optional<SubspaceCheck> subspace;
};

/// Jacobi via d^2 on every e^k and unimodularity via trace(ad_{e_i}); both
/// decided exactly (symbolically when parameters are free).
ValidationReport validate(const LieAlgebra7& algebra, const Subspace<Rational>* subspace = nullptr);

/// Basis of ker(d : Lambda^k -> Lambda^(k+1)). Throws Error(Mode) if the
/// algebra has free parameters and S is not Poly.
template <class S>
std::vector<KForm<S>> closed_subspace(const LieAlgebra7& algebra, int k, double eps = 1e-9);

/// Kernel {v : iota_v omega = 0}.
template <class S>
Subspace<S> contraction_kernel(const KForm<S>& omega, double eps = 1e-9);

/// Whether [x, y] lies in the span for all basis pairs.
template <class S>
bool bracket_closed(const LieAlgebra7& algebra, const Subspace<S>& sub, double eps = 1e-9);

extern template class Differential<Rational>;
extern template class Differential<double>;
extern template class Differential<Poly>;

} // namespace g2lab
