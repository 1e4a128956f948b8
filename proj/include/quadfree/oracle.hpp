#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadfree/corefns.hpp"
#include "quadfree/cuts.hpp"
#include "quadfree/freesets.hpp"
#include "quadfree/spectral.hpp"

namespace quadfree {

/// pass iff worst <= tolerance. `worst` is always a nonnegative-is-bad residual.
struct VerificationReport {
  std::string check;
  std::size_t samples = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  VectorXd witness;
  std::uint64_t seed = 0;
};

enum class SampleMode {
  /// ‖x‖ <= ‖y‖ and aᵀx + dᵀy + hᵀz = −1.
  Hyperplane,
  /// ‖x‖ <= ‖y‖ and aᵀx + dᵀy <= 0 (no z).
  Homogeneous,
};

/// Points of S in w-coordinates. Roughly half are drawn uniformly as
/// (ρu, v) and rescaled onto the hyperplane; the rest maximize λᵀx over the
/// slice of S at a random y, which is where interior points of a non-free
/// candidate hide. Throws SamplingExhausted after 10⁶ attempts.
std::vector<VectorXd> sample_S(const CanonicalForm& cf, std::size_t count, std::uint64_t seed,
                               SampleMode mode = SampleMode::Hyperplane);

constexpr double kFreenessTol = 1e-7;

/// Relative margin margin(w)/(1 + ‖w‖) must stay >= −1e−7.
VerificationReport check_freeness(const FreeSet& fs, const std::vector<VectorXd>& samples);

struct Witness {
  VectorXd point;
  VerificationReport report;
};

/// −(λ, β)/(aᵀλ + dᵀβ): a point of S ∩ H where −λᵀx + βᵀy <= 0 is tight.
/// With `fs`, also checks the point lies on the boundary of fs.
Witness exposing_witness(const CaseData& cd, const VectorXd& beta, const FreeSet* fs = nullptr);

struct AsymptoteSequence {
  std::vector<VectorXd> points;  // z_k for k = first_k .. N
  int first_k = 1;
  double last_violation = 0.0;
  double r = 0.0;
  VerificationReport report;
};

/// Points of S ∩ H along which −λᵀx + ∇φ(β)ᵀy tends to r(β); checks the gap at k = N against 10/N.
AsymptoteSequence asymptote_sequence(const CaseData& cd, const VectorXd& beta, int N);

/// max { λᵀx : ‖x‖ <= ‖y‖, aᵀx + dᵀy <= 0 } by scanning angles in span{λ, a}.
double phi_bruteforce(const CaseData& cd, const VectorXd& y, int grid);

VerificationReport check_duality(const CaseData& cd, const std::vector<VectorXd>& ys);
VerificationReport check_convexity(const CaseData& cd, const std::vector<std::pair<VectorXd, VectorXd>>& pairs);
/// Returns the finite-difference report and the Euler-identity report.
std::vector<VerificationReport> check_gradient(const CaseData& cd, const std::vector<VectorXd>& ys);

/// Checks coefᵀs <= rhs + 1e−7 (scaled) on points of {q <= 0} inside the cone:
/// half drawn in s-space by rejection, half mapped back from sample_S.
VerificationReport check_cut_validity(const QuadraticConstraint& qc, const SimplicialCone& cone,
                                      const CutCertificate& cert, std::size_t count, std::uint64_t seed);

struct VerifyOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  SampleMode mode = SampleMode::Hyperplane;
  std::size_t witness_count = 100;
  int sequence_length = 1000;
};

/// Freeness plus, where the data allows, witness, asymptote, duality, convexity and gradient suites.
std::vector<VerificationReport> run_verification(const CanonicalForm& cf, const FreeSet& fs,
                                                 const VerifyOptions& opt);

}  // namespace quadfree
