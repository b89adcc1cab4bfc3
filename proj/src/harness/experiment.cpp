#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "fadoa/harness.hpp"
#include "fadoa/virtual_array.hpp"

namespace fadoa::harness {

namespace {

// Runs job(i) for i in [0, count) on `workers` threads. Results are written
// by index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

struct TrialOutcome {
    std::vector<double> doas;
    bool failed = false;
    std::optional<double> rho;
};

}  // namespace

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
    std::vector<SweepPoint> out;
    for (const auto& series : config.series)
        for (int g : series.movements)
            for (Index n : config.blocks)
                for (double snr : config.snr_db) out.push_back({series.variant, g, n, snr});
    return out;
}

PipelineConfig point_config(const ExperimentConfig& config, const SweepPoint& point) {
    PipelineConfig pc = config.base;
    pc.variant = point.variant;
    pc.array.num_movements = point.movements;
    pc.num_blocks = point.blocks;
    pc.scene.set_snr_db(point.snr_db);
    pc.num_paths = pc.scene.num_paths();
    return pc;
}

TrialSeeds trial_seeds(std::uint64_t master, const SweepPoint& point, int trial) {
    const auto s = Substream(master)
                       .child(static_cast<std::uint64_t>(trial))
                       .child(std::bit_cast<std::uint64_t>(point.snr_db))
                       .child(static_cast<std::uint64_t>(point.blocks))
                       .child(static_cast<std::uint64_t>(point.movements));
    auto data = s.child(1);
    auto subset = s.child(2);
    return {data(), subset()};
}

double compute_rmse(const std::vector<std::vector<double>>& estimates, const std::vector<double>& truth) {
    detail::require(!estimates.empty(), "rmse needs at least one trial");
    std::vector<double> t = truth;
    std::sort(t.begin(), t.end());
    double sum = 0;
    for (const auto& trial : estimates) {
        detail::require(trial.size() == t.size(), "every trial needs one estimate per source");
        std::vector<double> e = trial;
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < e.size(); ++i) sum += (e[i] - t[i]) * (e[i] - t[i]);
    }
    return std::sqrt(sum / static_cast<double>(estimates.size() * t.size()));
}

std::vector<double> failure_estimates(const std::vector<double>& truth) {
    std::vector<double> out = truth;
    std::sort(out.begin(), out.end());
    for (double& v : out) v += 90.0;
    return out;
}

RmseTable run_experiment(const ExperimentConfig& config, int workers) {
    config.validate();
    const auto points = sweep_points(config);
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<TrialOutcome> outcomes(points.size() * trials);

    parallel_for(outcomes.size(), workers, [&](std::size_t job) {
        const SweepPoint& point = points[job / trials];
        const int trial = static_cast<int>(job % trials);
        PipelineConfig pc = point_config(config, point);
        const auto seeds = trial_seeds(config.seed, point, trial);
        pc.seed = seeds.subset;
        const auto data = simulate_dataset<double>(pc.scene, pc.array, pc.num_blocks, seeds.data);
        TrialOutcome& out = outcomes[job];
        try {
            const auto result = run_pipeline(pc, data);
            out.doas = result.doas;
            if (result.shrinkage) out.rho = result.shrinkage->rho;
        } catch (const ResolutionFailure&) {
            out.failed = true;
        } catch (const RankDeficiency&) {
            out.failed = true;
        }
    });

    RmseTable table;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto& truth = config.base.scene.doas_deg;
        std::vector<std::vector<double>> estimates;
        RmseRow row;
        row.point = points[p];
        row.trials = config.trials;
        double rho_sum = 0;
        int rho_count = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& o = outcomes[p * trials + t];
            if (o.failed) {
                ++row.failures;
                estimates.push_back(failure_estimates(truth));
            } else {
                estimates.push_back(o.doas);
            }
            if (o.rho) {
                rho_sum += *o.rho;
                ++rho_count;
            }
        }
        row.rmse_deg = compute_rmse(estimates, truth);
        if (rho_count > 0) row.mean_rho = rho_sum / rho_count;
        table.push_back(row);
    }
    return table;
}

EstimationResult run_single(const ExperimentConfig& config) {
    config.validate();
    const SweepPoint point{config.base.variant, config.base.array.num_movements, config.base.num_blocks,
                           config.base_snr_db};
    PipelineConfig pc = point_config(config, point);
    pc.validate();
    const auto seeds = trial_seeds(config.seed, point, 0);
    pc.seed = seeds.subset;
    const auto data = simulate_dataset<double>(pc.scene, pc.array, pc.num_blocks, seeds.data);
    return run_pipeline(pc, data);
}

std::vector<RhoCell> run_rho_surface(const ExperimentConfig& config, int workers) {
    config.validate();
    const auto& axes = config.rho_surface;
    detail::require(!axes.snr_db.empty() && !axes.blocks.empty(), "config has no rho_surface grid");
    std::vector<SweepPoint> cells;
    for (Index n : axes.blocks)
        for (double snr : axes.snr_db)
            cells.push_back({Variant::TMRLS_MUSIC, config.base.array.num_movements, n, snr});

    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<double> rhos(cells.size() * trials);
    parallel_for(rhos.size(), workers, [&](std::size_t job) {
        const SweepPoint& cell = cells[job / trials];
        const PipelineConfig pc = point_config(config, cell);
        const auto seeds = trial_seeds(config.seed, cell, static_cast<int>(job % trials));
        const auto data = simulate_dataset<double>(pc.scene, pc.array, pc.num_blocks, seeds.data);
        const CMatrixXd r = scm(rearrange_ars(data.stacked, pc.array));
        rhos[job] = shrinkage_coefficient(r, toeplitz_rectify(r), pc.num_blocks).rho;
    });

    std::vector<RhoCell> out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        double sum = 0;
        for (std::size_t t = 0; t < trials; ++t) sum += rhos[c * trials + t];
        out.push_back({cells[c].snr_db, cells[c].blocks, sum / static_cast<double>(trials), config.trials});
    }
    return out;
}

}  // namespace fadoa::harness
