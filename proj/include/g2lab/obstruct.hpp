#pragma once

#include "g2lab/catalog.hpp"
#include "g2lab/g2structure.hpp"
#include "g2lab/liealg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace g2lab {

enum class Conclusion { NoStablePositiveClosed3Form, NoClosedSimple4FormOnQ, Inconclusive };

std::string_view conclusion_name(Conclusion c);

/// Random-point evaluation of an identity through the exact rational pipeline,
/// independent of the symbolic elimination.
struct SampleCheck {
    std::size_t points = 0;
    std::size_t zero = 0;  // points at which the sampled quantity vanished
};

struct Identity {
    std::string description;
    Poly polynomial;  // expanded normal form
    bool identically_zero = false;
    std::optional<SampleCheck> sampled;
    /// For sign statements: the polynomial is <= 0 everywhere, certified by
    /// every term of its negative being an even monomial with a positive
    /// coefficient.
    std::optional<bool> nonpositive;
};

/// The certificate described at Identity::nonpositive.
bool certified_nonpositive(const Poly& p);

struct ObstructionReport {
    std::string algebra;
    /// parameter values and non-vanishing assumptions the computation used
    std::vector<std::string> assumptions;
    std::size_t closed3_dim = 0;
    std::vector<Identity> identities;
    Conclusion conclusion = Conclusion::Inconclusive;
    /// Short statement of which computation was carried out.
    std::string summary;

    /// JSON object text (polynomials as strings).
    std::string to_json() const;
};

/// Indeterminate standing for the coefficient of e^I in the generic form.
Poly coefficient_variable(Mask m);

struct GenericClosed3Form {
    KForm<Poly> phi{3};
    /// masks whose coefficients are the free indeterminates
    std::vector<Mask> free;
    /// non-vanishing assumptions introduced by the elimination
    std::vector<Poly> guards;
};

/// Closed 3-forms with polynomial coefficients in the free parameters of the
/// algebra and fresh indeterminates phi<ijk>; d of the result is exactly 0.
/// Columns listed in `preferred_free` are kept free whenever the elimination
/// allows, so the indeterminates can match a printed normal form; parameters
/// in `nonzero_params` are the preferred pivots. Every other pivot that is not
/// a constant ends up in `guards`.
GenericClosed3Form generic_closed_3form(const LieAlgebra7& algebra, const std::vector<Mask>& preferred_free = {},
                                        const std::vector<std::string>& nonzero_params = {});

/// b_phi(e_i, e_i) as the coefficient of e^{1..7} of
/// (1/6) iota_i phi ^ iota_i phi ^ phi.
Poly b_diagonal(const KForm<Poly>& phi, int i);

/// c with a = c b, when a is a constant multiple of b != 0.
std::optional<Rational> proportionality(const Poly& a, const Poly& b);

struct SamplingOptions {
    std::size_t points = 50;
    std::uint64_t seed = 20240611;
};

/// b(e_i,e_i) + b(e_j,e_j) on the generic closed form, plus the sign of
/// b(e_i,e_i) b(e_j,e_j). Either identical vanishing of the sum or a
/// certified non-positive product means b cannot be definite.
ObstructionReport b_diag_identity_check(const LieAlgebra7& algebra, int i, int j,
                                        const std::vector<Mask>& preferred_free = {},
                                        const std::vector<std::string>& nonzero_params = {},
                                        std::optional<SamplingOptions> sampling = SamplingOptions{});

/// Imposes phi|_N = 0 for N spanned by three basis vectors, then decides
/// b(e_i,e_i) = 0 for the listed indices.
ObstructionReport nilradical_vanishing_check(const LieAlgebra7& algebra, const std::vector<int>& n_indices,
                                             const std::vector<int>& diag_indices,
                                             std::optional<SamplingOptions> sampling = SamplingOptions{});

/// Whether a nonzero closed simple 4-form with kernel complementary to Q
/// exists. Q may depend on Laurent-unit indeterminates. Two tests:
///   * coordinate complement: Q is completed by basis vectors e_C and the
///     generator of Lambda^4(Q*) (dual to that completion) is tested for
///     closedness;
///   * generic complement: the dual covectors are perturbed by the 12
///     coordinates u<a><c> of an arbitrary complement; a coefficient of
///     d(omega) that is a nonzero monomial free of the u's certifies that no
///     complement works.
struct Simple4FormResult {
    ObstructionReport report;
    bool coordinate_generator_closed = false;
    /// nullopt when the generic test is inconclusive
    std::optional<bool> generic_certified_absent;
    KForm<Poly> generator{4};
};

Simple4FormResult closed_simple_4forms_on_Q(const LieAlgebra7& algebra, const std::vector<Vector7<Poly>>& Q);

/// Free coefficients of the printed generic closed forms of pencil-4,
/// pencil-5 and nonsolv-4; empty for other names.
std::vector<Mask> printed_free_coefficients(const std::string& catalog_name);

/// -phi267 (phi147 phi357 - phi157 phi347), the printed value of b(e6,e6) on
/// pencil-4.
Poly printed_pencil_b66();

/// The three candidates for Q on nonsolv-4 (the first depends on phi467 and
/// phi567, assumed nonzero).
std::vector<std::vector<Vector7<Poly>>> nonsolv4_q_candidates();

/// Every obstruction computation that applies to a catalog entry:
/// pencils -> diagonal identities on e6, e7 (plus the printed product on
/// pencil-4); nonsolv-1..3 -> nilradical vanishing on <e5,e6,e7>;
/// nonsolv-4 -> closed simple 4-forms on each Q candidate; bryant-s and
/// lauret-u -> the 4-form positive control on <e4,...,e7>; std-phi -> the
/// diagonal and nilradical controls.
std::vector<ObstructionReport> obstruct_entry(const CatalogEntry& entry,
                                              std::optional<SamplingOptions> sampling = SamplingOptions{});

} // namespace g2lab
