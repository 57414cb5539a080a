#include "rwbandit/trajectory.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>
#include <ostream>

namespace rwb {

bool Trajectory::valid() const
{
    if (nodes.size() < 2 || lengths.size() + 1 != nodes.size())
        return false;
    if (nodes.back() != kAbsorbing)
        return false;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i] < 0)
            return false;
    for (double l : lengths)
        if (!(l >= 0.0 && l <= 1.0))
            return false;
    return true;
}

double trajectory_length(const Trajectory& traj)
{
    return std::accumulate(traj.lengths.begin(), traj.lengths.end(), 0.0);
}

Trajectory sample_trajectory(const ChainInstance& chain, const EdgeLengths& lengths, int start, Rng& rng,
                             long epoch)
{
    const int K = chain.size();
    if (start < 0 || start >= K)
        throw std::out_of_range(fmt::format("start node {} out of range [0, {})", start, K));
    if (lengths.size() != K)
        throw std::invalid_argument("edge lengths do not match the chain size");

    Trajectory traj;
    traj.epoch = epoch;
    traj.nodes.push_back(start);
    int current = start;
    for (long step = 0; step < kStepCap; ++step) {
        const auto& cdf = chain.cumulative_row(current);
        const double u = rng.uniform();
        int next = K;
        for (int j = 0; j < K; ++j) {
            if (u < cdf[j]) {
                next = j;
                break;
            }
        }
        if (next == K) {
            traj.lengths.push_back(lengths.to_absorbing(current));
            traj.nodes.push_back(kAbsorbing);
            return traj;
        }
        traj.lengths.push_back(lengths(current, next));
        traj.nodes.push_back(next);
        current = next;
    }
    throw CorruptedInstance(fmt::format("random walk exceeded {} steps", kStepCap));
}

LengthProcess LengthProcess::fixed(EdgeLengths lengths)
{
    LengthProcess p;
    p.kind_ = Kind::Fixed;
    p.fixed_ = std::move(lengths);
    return p;
}

LengthProcess LengthProcess::sampler(Draw draw, EdgeLengths mean)
{
    LengthProcess p;
    p.kind_ = Kind::Sampler;
    p.draw_ = std::move(draw);
    p.fixed_ = std::move(mean);
    return p;
}

LengthProcess LengthProcess::schedule(std::vector<EdgeLengths> epochs)
{
    if (epochs.empty())
        throw std::invalid_argument("an edge-length schedule needs at least one epoch");
    LengthProcess p;
    p.kind_ = Kind::Schedule;
    p.fixed_ = epochs.front();
    p.schedule_ = std::move(epochs);
    for (const auto& e : p.schedule_)
        if (e.size() != p.fixed_.size())
            throw std::invalid_argument("schedule epochs differ in size");
    return p;
}

EdgeLengths LengthProcess::realize(long t, Rng& rng) const
{
    switch (kind_) {
    case Kind::Fixed:
        return fixed_;
    case Kind::Sampler:
        return draw_(rng);
    case Kind::Schedule:
        break;
    }
    return expected(t);
}

const EdgeLengths& LengthProcess::expected(long t) const
{
    if (kind_ != Kind::Schedule)
        return fixed_;
    if (t < 1 || t > horizon())
        throw std::out_of_range(fmt::format("epoch {} outside schedule of length {}", t, horizon()));
    return schedule_[static_cast<std::size_t>(t - 1)];
}

LengthProcess LengthProcess::freeze(long T, Rng& rng) const
{
    if (kind_ == Kind::Schedule) {
        if (horizon() != T)
            throw std::invalid_argument(fmt::format("schedule has {} epochs, run needs {}", horizon(), T));
        return *this;
    }
    std::vector<EdgeLengths> epochs;
    epochs.reserve(static_cast<std::size_t>(T));
    for (long t = 1; t <= T; ++t)
        epochs.push_back(realize(t, rng));
    return schedule(std::move(epochs));
}

EdgeLengths exp_adv_lengths(int K, double w)
{
    Matrix L = Matrix::Ones(K, K + 1);
    for (int i = 0; i < K; ++i)
        L(i, K) = clip01(i == 0 ? w + 0.5 : w);
    return EdgeLengths(std::move(L));
}

double clipped_normal_mean(double mean, double stddev)
{
    const auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    const auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
    const double a = (0.0 - mean) / stddev;
    const double b = (1.0 - mean) / stddev;
    return mean * (Phi(b) - Phi(a)) + stddev * (phi(a) - phi(b)) + (1.0 - Phi(b));
}

LengthProcess exp_adv_length_process(int K)
{
    Matrix mean = Matrix::Ones(K, K + 1);
    for (int i = 0; i < K; ++i)
        mean(i, K) = clipped_normal_mean(i == 0 ? kExpAdvNoiseMean + 0.5 : kExpAdvNoiseMean, kExpAdvNoiseStd);
    return LengthProcess::sampler(
        [K](Rng& rng) { return exp_adv_lengths(K, rng.normal(kExpAdvNoiseMean, kExpAdvNoiseStd)); },
        EdgeLengths(std::move(mean)));
}

LengthProcess exp_adv_schedule(int K, long T, Rng& rng)
{
    return exp_adv_length_process(K).freeze(T, rng);
}

LengthProcess bernoulli_length_process(const Matrix& means)
{
    if (!means.allFinite() || (means.array() < 0.0).any() || (means.array() > 1.0).any())
        throw std::invalid_argument("Bernoulli length means must lie in [0, 1]");
    return LengthProcess::sampler(
        [means](Rng& rng) {
            Matrix L(means.rows(), means.cols());
            for (Eigen::Index j = 0; j < means.cols(); ++j)
                for (Eigen::Index i = 0; i < means.rows(); ++i)
                    L(i, j) = rng.bernoulli(means(i, j)) ? 1.0 : 0.0;
            return EdgeLengths(std::move(L));
        },
        EdgeLengths(means));
}

void write_trajectory_header(std::ostream& out)
{
    out << "t,J_t,H,L,nodes\n";
}

void write_trajectory_row(std::ostream& out, const Trajectory& traj)
{
    std::string seq;
    for (std::size_t i = 0; i < traj.nodes.size(); ++i) {
        if (i)
            seq += ' ';
        seq += traj.nodes[i] == kAbsorbing ? std::string("*") : std::to_string(traj.nodes[i]);
    }
    out << fmt::format("{},{},{},{},{}\n", traj.epoch, traj.played(), traj.steps(), trajectory_length(traj), seq);
}

}  // namespace rwb
