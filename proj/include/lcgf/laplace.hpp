#pragma once

// Laplace transform on generalized functions: classical exponential-polynomial
// parts go through the usual table, compactly supported generalized parts are
// integrated against e^{-zt}. Images are finite sums R_j(z) e^{-a_j z}.

#include "lcgf/genfunc.hpp"

#include <limits>
#include <string>
#include <vector>

namespace lcgf {

/// coef * H(t - shift) (t - shift)^power e^{rate (t - shift)}; a zero shift is the plain function on t > 0.
struct ClassicalTerm {
    LCComplex coef;
    int power = 0;
    Complex rate{};
    LCReal shift;
};

struct GeneralizedPart {
    LCComplex coef;
    GenFunction psi;
};

struct LaplaceDomainElement {
    std::vector<ClassicalTerm> classical;
    std::vector<GeneralizedPart> generalized;
    GfSettings settings;

    explicit LaplaceDomainElement(GfSettings s = {}) : settings(std::move(s)) {}
    bool empty() const { return classical.empty() && generalized.empty(); }

    friend LaplaceDomainElement operator+(const LaplaceDomainElement& a, const LaplaceDomainElement& b);
    friend LaplaceDomainElement operator-(const LaplaceDomainElement& a, const LaplaceDomainElement& b);
    friend LaplaceDomainElement operator*(const LCComplex& c, const LaplaceDomainElement& f);
};

/// coef t^power e^{rate t}.
LaplaceDomainElement exp_poly(const LCComplex& coef, int power, Complex rate, const GfSettings& settings = {});
LaplaceDomainElement classical_sin(double omega = 1.0, const GfSettings& settings = {});
LaplaceDomainElement classical_cos(double omega = 1.0, const GfSettings& settings = {});
LaplaceDomainElement generalized(const GenFunction& psi);
/// H(t - a) f(t - a) for the classical parts; generalized parts are translated.
LaplaceDomainElement delayed(const LaplaceDomainElement& f, const LCReal& a);

/// Largest real part of a classical rate (the growth constant), -inf without classical parts.
double growth_bound(const LaplaceDomainElement& f);

/// The element as a generalized function on the whole line; classical parts are
/// their exponential-polynomial extensions, delayed parts carry a Heaviside factor.
GenFunction to_genfunction(const LaplaceDomainElement& f);
/// Splits a generalized function into classical pieces and generalized remainders.
LaplaceDomainElement from_genfunction(const GenFunction& g);
std::string to_string(const LaplaceDomainElement& f);

struct Pole {
    Complex value;
    int multiplicity = 1;
};

/// numerator(z) / prod (z - pole)^m * e^{-shift z}; numerator coefficients ascending.
struct ImageTerm {
    std::vector<LCComplex> numerator;
    std::vector<Pole> poles;
    LCReal shift;
};

/// Monic denominator expanded into ascending coefficients.
std::vector<Complex> expand_denominator(const std::vector<Pole>& poles);

class LaplaceImage {
public:
    explicit LaplaceImage(TruncationContext ctx = {}, double half_plane = -std::numeric_limits<double>::infinity());

    /// Merges terms with equal shifts over a common denominator and cancels common factors.
    static LaplaceImage from_terms(std::vector<ImageTerm> terms, TruncationContext ctx, double half_plane);

    const std::vector<ImageTerm>& terms() const { return terms_; }
    const TruncationContext& context() const { return ctx_; }
    /// Declared region Re z > half_plane.
    double half_plane() const { return half_plane_; }
    bool is_zero() const { return terms_.empty(); }

    /// Value at a finite z with st(Re z) inside the region.
    LCComplex operator()(const LCComplex& z) const;

    friend LaplaceImage operator+(const LaplaceImage& a, const LaplaceImage& b);
    friend LaplaceImage operator-(const LaplaceImage& a, const LaplaceImage& b);
    friend LaplaceImage operator*(const LCComplex& c, const LaplaceImage& f);
    /// Division by a2 z^2 + a1 z + a0 (or lower degree).
    LaplaceImage divided_by(double a2, double a1, double a0) const;
    /// Multiplication by e^{-a z}.
    LaplaceImage delayed(const LCReal& a) const;

private:
    TruncationContext ctx_;
    double half_plane_;
    std::vector<ImageTerm> terms_;
};

std::string to_string(const LaplaceImage& f);
/// Term-level equality up to the given coefficient tolerance.
bool images_equal(const LaplaceImage& a, const LaplaceImage& b, double tol = 1e-10);

enum class Ruleset { hat, engineer, naive };
const char* to_string(Ruleset r);

/// The contradiction-free transform; DomainError when a generalized part is not supported in [s, inf).
LaplaceImage transform(const LaplaceDomainElement& f);
/// z^n e^{-2 s z}.
LaplaceImage transform_derivative_shifted(int n, const TruncationContext& ctx = {});
/// Table lookups of a rule set; appends the rules used to the trace.
LaplaceImage classical_table(const LaplaceDomainElement& f, Ruleset ruleset, std::vector<std::string>* trace = nullptr);
/// Partial fractions back to exponential polynomials; polynomial parts become deltas.
LaplaceDomainElement inverse_transform(const LaplaceImage& F, const GfSettings& settings = {});

enum class EqualityMode { exact, weak };

/// a2 y'' + a1 y' + a0 y = rhs with y(0), y'(0).
struct IVPSpec {
    double a2 = 1.0;
    double a1 = 0.0;
    double a0 = 0.0;
    LaplaceDomainElement rhs;
    LCComplex y0;
    LCComplex yp0;
    EqualityMode mode = EqualityMode::weak;
};

struct ValueCheck {
    std::string name;
    LCComplex expected;
    LCComplex obtained;
    LCComplex discrepancy;
    bool holds = false;
};

struct IVPResult {
    LaplaceImage image;
    LaplaceDomainElement solution;
    GenFunction solution_gen;
    std::vector<std::string> trace;
    std::vector<ValueCheck> initial_checks;
    bool initial_ok = false;
    WeakEqualReport equation;
    bool equation_ok = false;
    bool verified() const { return initial_ok && equation_ok; }
};

IVPResult solve_ivp(const IVPSpec& p, const BatteryOptions& battery = {});

enum class AuditVerdict { consistent, inconsistent };
const char* to_string(AuditVerdict v);

struct ContradictionReport {
    Ruleset ruleset = Ruleset::naive;
    std::vector<std::string> trace;
    LaplaceDomainElement solution;
    std::vector<ValueCheck> checks;  ///< initial data evaluated as one-sided limits at 0+
    AuditVerdict verdict = AuditVerdict::consistent;
};

/// Runs the classical pipeline of a rule set; the engineer set ends with the limit of the delay to 0.
ContradictionReport audit_classical(const IVPSpec& p, Ruleset ruleset);

struct Lemma62Check {
    Verdict weak;
    bool transforms_equal = false;
    bool agree = false;
};

Lemma62Check check_lemma_6_2(const LaplaceDomainElement& f, const LaplaceDomainElement& g,
                             const BatteryOptions& battery = {});

}  // namespace lcgf
