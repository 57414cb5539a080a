#pragma once

#include "rwbandit/markov.hpp"
#include "rwbandit/rng.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace rwb {

inline constexpr int kAbsorbing = -1;
inline constexpr long kStepCap = 10'000'000;

class CorruptedInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// X_0, L_1, X_1, ..., L_H, X_H with X_H the absorbing marker.
struct Trajectory {
    std::vector<int> nodes;
    std::vector<double> lengths;
    long epoch = 0;

    int played() const { return nodes.front(); }
    int steps() const { return static_cast<int>(lengths.size()); }
    bool valid() const;
};

double trajectory_length(const Trajectory& traj);

Trajectory sample_trajectory(const ChainInstance& chain, const EdgeLengths& lengths, int start, Rng& rng,
                             long epoch = 0);

// Edge-length process seen by a run. Schedules are fixed before the run starts.
class LengthProcess {
public:
    enum class Kind { Fixed, Sampler, Schedule };
    using Draw = std::function<EdgeLengths(Rng&)>;

    static LengthProcess fixed(EdgeLengths lengths);
    static LengthProcess sampler(Draw draw, EdgeLengths mean);
    static LengthProcess schedule(std::vector<EdgeLengths> epochs);

    Kind kind() const { return kind_; }
    int size() const { return fixed_.size(); }
    long horizon() const { return static_cast<long>(schedule_.size()); }

    // Realized lengths of epoch t (1-based). Samplers consume rng; other kinds ignore it.
    EdgeLengths realize(long t, Rng& rng) const;
    // E[l^(t)]: the mean matrix for samplers, the realized lengths otherwise.
    const EdgeLengths& expected(long t) const;

    // Draws T epochs up front from a sampler (or repeats fixed lengths).
    LengthProcess freeze(long T, Rng& rng) const;

private:
    Kind kind_ = Kind::Fixed;
    EdgeLengths fixed_;  // fixed lengths or sampler mean
    Draw draw_;
    std::vector<EdgeLengths> schedule_;
};

inline double clip01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// Lengths of the 9-node experiment for a given noise draw w: clip(w + 0.5) on
// node 0's absorbing edge, clip(w) on the other absorbing edges, 1 elsewhere.
EdgeLengths exp_adv_lengths(int K, double w);

// E[clip_[0,1](X)] for X ~ N(mean, stddev), in closed form.
double clipped_normal_mean(double mean, double stddev);

inline constexpr double kExpAdvNoiseMean = 0.5;
inline constexpr double kExpAdvNoiseStd = 0.1;

// i.i.d. per-epoch clipped-Gaussian lengths of the 9-node experiment.
LengthProcess exp_adv_length_process(int K = 9);
// Oblivious schedule with W_1..W_T realized from rng.
LengthProcess exp_adv_schedule(int K, long T, Rng& rng);

// Every edge length an independent Bernoulli(mean) draw per epoch.
LengthProcess bernoulli_length_process(const Matrix& means);

// CSV rows "t,J_t,H,L,nodes" (nodes space separated, absorbing as '*').
void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, const Trajectory& traj);

}  // namespace rwb
