#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fadoa/core.hpp"
#include "fadoa/covariance.hpp"
#include "fadoa/geometry.hpp"
#include "fadoa/music.hpp"
#include "fadoa/scene.hpp"
#include "fadoa/subspace.hpp"

namespace fadoa {

/// TMRLS_MUSIC: ARS, Toeplitz shrinkage + Nystrom.
/// TMR_MUSIC:   NARS, coarray Toeplitz + Nystrom.
/// FPA_MUSIC:   static array (G = 0), plain SCM + exact EVD.
/// SCM_MUSIC:   ARS ablation without the shrinkage stage.
/// EXACT_EVD:   either mode, Nystrom replaced by a full EVD.
enum class Variant { TMRLS_MUSIC, TMR_MUSIC, FPA_MUSIC, SCM_MUSIC, EXACT_EVD };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct PipelineConfig {
    ArraySpec array;
    Scene scene;
    Index num_blocks = 200;
    Index num_paths = 1;      ///< KL, supplied (no source enumeration)
    Index subset_size = 0;    ///< N_a; 0 picks max(KL, dim/2)
    double grid_step = 0.05;  ///< degrees
    std::uint64_t seed = 0;   ///< Nystrom subset seed
    SubsetSelection selection = SubsetSelection::Random;
    Variant variant = Variant::TMRLS_MUSIC;

    /// Dimension of the matrix the subspace is extracted from.
    Index subspace_dim() const;
    Index effective_subset_size() const;

    void validate() const;
};

struct EstimationResult {
    std::vector<double> doas;  ///< ascending, exactly KL entries
    SpectrumGrid<double> spectrum;
    std::optional<ShrinkageDiag<double>> shrinkage;
    std::vector<Index> subset;
    SubspaceMethod method = SubspaceMethod::Exact;
    Variant variant = Variant::TMRLS_MUSIC;
};

EstimationResult run_tmrls_music(const PipelineConfig& config, const SnapshotSet<double>& data);
EstimationResult run_tmr_music(const PipelineConfig& config, const SnapshotSet<double>& data);
EstimationResult run_baseline_fpa_music(const PipelineConfig& config, const SnapshotSet<double>& data);

/// Dispatches on config.variant.
EstimationResult run_pipeline(const PipelineConfig& config, const SnapshotSet<double>& data);

/// ARS back half, from the virtual-ULA sample covariance onwards.
EstimationResult estimate_from_virtual_covariance(const PipelineConfig& config, const CMatrixXd& r_virtual);

/// NARS back half, from the per-state covariances onwards.
EstimationResult estimate_from_sub_covariances(const PipelineConfig& config, std::span<const CMatrixXd> sub_covs);

}  // namespace fadoa
