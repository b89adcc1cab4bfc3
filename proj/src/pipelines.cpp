#include "fadoa/pipelines.hpp"

#include <algorithm>

#include "fadoa/virtual_array.hpp"

namespace fadoa {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::TMRLS_MUSIC: return "TMRLS_MUSIC";
        case Variant::TMR_MUSIC: return "TMR_MUSIC";
        case Variant::FPA_MUSIC: return "FPA_MUSIC";
        case Variant::SCM_MUSIC: return "SCM_MUSIC";
        case Variant::EXACT_EVD: return "EXACT_EVD";
    }
    return "?";
}

Variant variant_from_string(const std::string& name) {
    for (Variant v : {Variant::TMRLS_MUSIC, Variant::TMR_MUSIC, Variant::FPA_MUSIC, Variant::SCM_MUSIC,
                      Variant::EXACT_EVD}) {
        if (name == to_string(v)) return v;
    }
    throw InvalidArgument("unknown estimator variant '" + name + "'");
}

Index PipelineConfig::subspace_dim() const {
    if (variant == Variant::FPA_MUSIC) return array.num_antennas;
    return virtual_size(array);
}

Index PipelineConfig::effective_subset_size() const {
    if (subset_size > 0) return subset_size;
    return std::clamp<Index>(subspace_dim() / 2, num_paths, subspace_dim());
}

void PipelineConfig::validate() const {
    array.validate();
    scene.validate();
    detail::require(scene.noise_var >= 0 && scene.path_gain_var > 0 && scene.signal_power > 0,
                    "pipeline scenes need positive signal powers");
    detail::require(num_blocks >= 4, "pipelines need N >= 4 time blocks");
    detail::require(num_paths == scene.num_paths(), "KL must equal the scene's path count");
    detail::require(grid_step > 0 && grid_step <= 90, "grid step must lie in (0, 90] degrees");
    switch (variant) {
        case Variant::TMRLS_MUSIC:
        case Variant::SCM_MUSIC:
            detail::require(array.mode == Mode::ARS, std::string(to_string(variant)) + " needs an ARS array");
            break;
        case Variant::TMR_MUSIC:
            detail::require(array.mode == Mode::NARS, "TMR_MUSIC needs a NARS array");
            break;
        case Variant::FPA_MUSIC:
            detail::require(array.num_movements == 0, "FPA_MUSIC needs G = 0");
            detail::require(num_paths < array.num_antennas, "FPA_MUSIC needs KL < M");
            break;
        case Variant::EXACT_EVD:
            break;
    }
    if (variant != Variant::FPA_MUSIC) {
        detail::require(num_paths >= 1 && num_paths <= max_resolvable(array),
                        "KL = " + std::to_string(num_paths) + " exceeds the identifiability bound " +
                            std::to_string(max_resolvable(array)));
    }
    const bool nystrom = variant == Variant::TMRLS_MUSIC || variant == Variant::TMR_MUSIC ||
                         variant == Variant::SCM_MUSIC;
    if (nystrom) {
        const Index na = effective_subset_size();
        detail::require(na >= num_paths && na <= subspace_dim(),
                        "Nystrom subset size must lie in [KL, dim]");
    }
}

namespace {

bool uses_nystrom(Variant v) { return v != Variant::FPA_MUSIC && v != Variant::EXACT_EVD; }

EstimationResult finish(const PipelineConfig& config, const CMatrixXd& r, const SteeringFamily<double>& family,
                        EstimationResult result) {
    const SubspaceBasis<double> basis =
        uses_nystrom(config.variant)
            ? nystrom_signal_subspace<double>(r, config.effective_subset_size(), config.num_paths, config.seed,
                                              config.selection)
            : exact_signal_subspace<double>(r, config.num_paths);
    result.method = basis.method;
    result.subset = basis.subset;
    result.spectrum = music_spectrum<double>(basis, family, config.grid_step);
    result.doas = pick_peaks<double>(result.spectrum, config.num_paths);
    result.variant = config.variant;
    return result;
}

}  // namespace

EstimationResult estimate_from_virtual_covariance(const PipelineConfig& config, const CMatrixXd& r_virtual) {
    detail::require(config.array.mode == Mode::ARS, "virtual-ULA estimation needs an ARS array");
    detail::require(r_virtual.rows() == virtual_size(config.array), "covariance size must equal M(G+1)");
    EstimationResult result;
    const auto family = SteeringFamily<double>::ars(r_virtual.rows(), config.array.step);
    if (config.variant == Variant::SCM_MUSIC) return finish(config, r_virtual, family, std::move(result));

    const CMatrixXd rt = toeplitz_rectify(r_virtual);
    const auto diag = shrinkage_coefficient(r_virtual, rt, config.num_blocks);
    result.shrinkage = diag;
    return finish(config, enhanced_scm(r_virtual, rt, diag.rho), family, std::move(result));
}

EstimationResult estimate_from_sub_covariances(const PipelineConfig& config, std::span<const CMatrixXd> sub_covs) {
    const auto r = build_coarray_vector<double>(sub_covs, config.array);
    const CMatrixXd rc = build_toeplitz_scm(r);
    const auto family = SteeringFamily<double>::nars(r.extent, config.array.step);
    return finish(config, rc, family, EstimationResult{});
}

EstimationResult run_tmrls_music(const PipelineConfig& config, const SnapshotSet<double>& data) {
    config.validate();
    detail::require(data.mode == Mode::ARS, "TMRLS-MUSIC needs ARS snapshots");
    detail::require(data.num_blocks() == config.num_blocks, "dataset length differs from config N");
    const CMatrixXd y = rearrange_ars(data.stacked, config.array);
    return estimate_from_virtual_covariance(config, scm(y));
}

EstimationResult run_tmr_music(const PipelineConfig& config, const SnapshotSet<double>& data) {
    config.validate();
    detail::require(data.mode == Mode::NARS, "TMR-MUSIC needs NARS snapshots");
    detail::require(data.num_blocks() == config.num_blocks, "dataset length differs from config N");
    const auto covs = sub_covariances(data);
    return estimate_from_sub_covariances(config, covs);
}

EstimationResult run_baseline_fpa_music(const PipelineConfig& config, const SnapshotSet<double>& data) {
    config.validate();
    detail::require(config.variant == Variant::FPA_MUSIC, "baseline needs the FPA_MUSIC variant");
    detail::require(data.num_blocks() == config.num_blocks, "dataset length differs from config N");
    const CMatrixXd& x = data.mode == Mode::ARS ? data.stacked : data.per_state.at(0);
    detail::require(x.rows() == config.array.num_antennas, "baseline needs M x N snapshots");
    // G = 0 puts the M elements at 0, d, ..., (M-1)d in both modes
    const auto family = SteeringFamily<double>::ars(x.rows(), config.array.step);
    return finish(config, scm(x), family, EstimationResult{});
}

EstimationResult run_pipeline(const PipelineConfig& config, const SnapshotSet<double>& data) {
    switch (config.variant) {
        case Variant::TMRLS_MUSIC:
        case Variant::SCM_MUSIC:
            return run_tmrls_music(config, data);
        case Variant::TMR_MUSIC:
            return run_tmr_music(config, data);
        case Variant::FPA_MUSIC:
            return run_baseline_fpa_music(config, data);
        case Variant::EXACT_EVD:
            return config.array.mode == Mode::ARS ? run_tmrls_music(config, data) : run_tmr_music(config, data);
    }
    throw InvalidArgument("unknown variant");
}

}  // namespace fadoa
