// SPDX-License-Identifier: Apache-2.0
//
// risnoma: sum-rate optimization for RIS-assisted NOMA D2D links
// Copyright (C) 2026 The risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "risnoma/common.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"

namespace risnoma {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point3& a, const Point3& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

/// Link classes sharing a path-loss exponent and a Rician K-factor.
enum class LinkClass : int { uav_ground = 0, uav_ris = 1, ris_ground = 2, dt_ris = 3, dt_ground = 4 };

inline constexpr int kLinkClassCount = 5;

inline const char* to_string(LinkClass c) {
    switch (c) {
    case LinkClass::uav_ground: return "uav_ground";
    case LinkClass::uav_ris: return "uav_ris";
    case LinkClass::ris_ground: return "ris_ground";
    case LinkClass::dt_ris: return "dt_ris";
    case LinkClass::dt_ground: return "dt_ground";
    }
    return "?";
}

struct LinkModel {
    double exponent = 2.2;  ///< path-loss exponent alpha
    double rician_k = 0.0;  ///< linear K-factor; 0 is Rayleigh
};

/// Node placement and per-class fading statistics.
struct Geometry {
    Point3 uav{0.0, 100.0, 100.0};
    Point3 dt{0.0, 0.0, 0.0};
    Point3 cu{0.0, 100.0, 0.0};
    Point3 dr_i{20.0, 0.0, 0.0};
    Point3 dr_j{40.0, 0.0, 0.0};
    Point3 ris{30.0, 40.0, 10.0};

    std::array<LinkModel, kLinkClassCount> links{{
        {2.2, 10.0},  // uav_ground
        {2.2, 10.0},  // uav_ris
        {2.2, 10.0},  // ris_ground
        {2.2, 10.0},  // dt_ris
        {3.0, 0.0},   // dt_ground
    }};

    double ref_loss_db = -30.0;  ///< large-scale power gain at 1 m

    /// RIS -> receiver vectors are the same physical link on the UAV and DT paths.
    bool shared_ris_drop_links = true;

    LinkModel& link(LinkClass c) { return links[static_cast<std::size_t>(c)]; }
    const LinkModel& link(LinkClass c) const { return links[static_cast<std::size_t>(c)]; }

    void validate() const {
        const std::array<std::pair<const char*, Point3>, 6> nodes{{
            {"uav", uav}, {"dt", dt}, {"cu", cu}, {"dr_i", dr_i}, {"dr_j", dr_j}, {"ris", ris}}};
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            for (std::size_t b = a + 1; b < nodes.size(); ++b) {
                if (!(distance(nodes[a].second, nodes[b].second) > 0.0)) {
                    throw InvalidInput(std::string("coincident nodes: ") + nodes[a].first + " and " + nodes[b].first);
                }
            }
        }
        for (int c = 0; c < kLinkClassCount; ++c) {
            const LinkModel& m = links[static_cast<std::size_t>(c)];
            const std::string name = to_string(static_cast<LinkClass>(c));
            require(m.exponent >= 1.5 && m.exponent <= 6.0, "path-loss exponent of " + name + " outside [1.5, 6]");
            require(std::isfinite(m.rician_k) && m.rician_k >= 0.0, "K-factor of " + name + " must be finite and >= 0");
        }
        require(std::isfinite(ref_loss_db), "reference loss must be finite");
    }

    /// Mean power gain ref_loss * d^-alpha of a link.
    double large_scale_gain(LinkClass c, const Point3& a, const Point3& b) const {
        return db_to_linear(ref_loss_db) * std::pow(distance(a, b), -link(c).exponent);
    }
};

/// The three RIS -> receiver vectors.
struct RisDropLinks {
    ComplexVector cu;
    ComplexVector dri;
    ComplexVector drj;
};

/// One Monte Carlo draw of every link in the network.
///
/// `ris_to` carries h_{k,x} (DT-originated reflections), `ris_to_uav_path`
/// carries g_{k,x} (UAV-originated reflections). The two are identical unless
/// the geometry asks for independent drop links.
struct ChannelRealization {
    Complex direct_uav_cu{};
    Complex direct_uav_dri{};
    Complex direct_uav_drj{};
    Complex direct_dt_cu{};
    Complex direct_dt_dri{};
    Complex direct_dt_drj{};
    ComplexVector uav_to_ris;
    ComplexVector dt_to_ris;
    RisDropLinks ris_to;
    RisDropLinks ris_to_uav_path;
    std::uint64_t seed = 0;
    bool relabeled = false;  ///< DR_i and DR_j were swapped to keep DR_i the stronger receiver

    int size() const { return static_cast<int>(uav_to_ris.size()); }

    /// All-zero realization with K elements.
    static ChannelRealization zeros(int k) {
        ChannelRealization ch;
        ch.uav_to_ris = ComplexVector::Zero(k);
        ch.dt_to_ris = ComplexVector::Zero(k);
        ch.ris_to = {ComplexVector::Zero(k), ComplexVector::Zero(k), ComplexVector::Zero(k)};
        ch.ris_to_uav_path = ch.ris_to;
        return ch;
    }

    void swap_receivers() {
        std::swap(direct_uav_dri, direct_uav_drj);
        std::swap(direct_dt_dri, direct_dt_drj);
        ris_to.dri.swap(ris_to.drj);
        ris_to_uav_path.dri.swap(ris_to_uav_path.drj);
        relabeled = !relabeled;
    }
};

/// |direct + sum_k incident_k e^{j theta_k} reflect_k|^2.
inline double effective_gain(Complex direct, const ComplexVector& incident, const ComplexVector& reflect,
                             const PhaseVector& phases) {
    require_same_size(incident.size(), reflect.size(), "effective_gain incident/reflect");
    require_same_size(incident.size(), phases.size(), "effective_gain phases");
    Complex sum = direct;
    for (Eigen::Index k = 0; k < incident.size(); ++k) {
        sum += incident(k) * std::polar(1.0, phases[static_cast<int>(k)]) * reflect(k);
    }
    return std::norm(sum);
}

enum class Transmitter { uav, dt };
enum class Receiver { cu, dri, drj };

/// Effective (direct + reflected) power gain between a transmitter and a
/// receiver, without transmit power.
inline double composite_gain(const ChannelRealization& ch, Transmitter tx, Receiver rx, const PhaseVector& phases) {
    if (tx == Transmitter::uav) {
        switch (rx) {
        case Receiver::cu: return effective_gain(ch.direct_uav_cu, ch.uav_to_ris, ch.ris_to_uav_path.cu, phases);
        case Receiver::dri: return effective_gain(ch.direct_uav_dri, ch.uav_to_ris, ch.ris_to_uav_path.dri, phases);
        case Receiver::drj: return effective_gain(ch.direct_uav_drj, ch.uav_to_ris, ch.ris_to_uav_path.drj, phases);
        }
    }
    switch (rx) {
    case Receiver::cu: return effective_gain(ch.direct_dt_cu, ch.dt_to_ris, ch.ris_to.cu, phases);
    case Receiver::dri: return effective_gain(ch.direct_dt_dri, ch.dt_to_ris, ch.ris_to.dri, phases);
    case Receiver::drj: return effective_gain(ch.direct_dt_drj, ch.dt_to_ris, ch.ris_to.drj, phases);
    }
    return 0.0;
}

namespace detail {

// Independent random stream per physical link, so that a realization with
// fewer RIS elements is an exact prefix of one with more.
enum class LinkStream : std::uint32_t {
    uav_cu, uav_dri, uav_drj, dt_cu, dt_dri, dt_drj, uav_ris, dt_ris,
    ris_cu, ris_dri, ris_drj, ris_cu_uav, ris_dri_uav, ris_drj_uav
};

inline std::mt19937_64 make_stream(std::uint64_t seed, LinkStream link) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(link), 0x52495355U};
    return std::mt19937_64(seq);
}

/// Rician draw with mean power `gain`: LoS part with a uniform random phase
/// plus a CN(0, 1) scattered part, weighted by the K-factor.
inline Complex rician_sample(std::mt19937_64& rng, double gain, double rician_k) {
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double los_phase = phase(rng);
    const double re = normal(rng);
    const double im = normal(rng);
    const double los = std::sqrt(rician_k / (rician_k + 1.0));
    const double nlos = std::sqrt(1.0 / (rician_k + 1.0));
    return std::sqrt(gain) * (los * std::polar(1.0, los_phase) + nlos * Complex(re, im));
}

inline Complex draw_scalar(std::uint64_t seed, LinkStream link, double gain, double rician_k) {
    auto rng = make_stream(seed, link);
    return rician_sample(rng, gain, rician_k);
}

inline ComplexVector draw_vector(std::uint64_t seed, LinkStream link, int k, double gain, double rician_k) {
    auto rng = make_stream(seed, link);
    ComplexVector v(k);
    for (int e = 0; e < k; ++e) {
        v(e) = rician_sample(rng, gain, rician_k);
    }
    return v;
}

}  // namespace detail

/// Draws one realization. Deterministic in (params.K, geometry, seed).
inline ChannelRealization generate_channels(const SystemParams& params, const Geometry& geometry, std::uint64_t seed) {
    geometry.validate();
    require(params.K >= 1, "K must be at least 1");
    using detail::LinkStream;
    const Geometry& g = geometry;
    const int k = params.K;

    auto scalar = [&](LinkStream s, LinkClass c, const Point3& a, const Point3& b) {
        return detail::draw_scalar(seed, s, g.large_scale_gain(c, a, b), g.link(c).rician_k);
    };
    auto vec = [&](LinkStream s, LinkClass c, const Point3& a, const Point3& b) {
        return detail::draw_vector(seed, s, k, g.large_scale_gain(c, a, b), g.link(c).rician_k);
    };

    ChannelRealization ch;
    ch.seed = seed;
    ch.direct_uav_cu = scalar(LinkStream::uav_cu, LinkClass::uav_ground, g.uav, g.cu);
    ch.direct_uav_dri = scalar(LinkStream::uav_dri, LinkClass::uav_ground, g.uav, g.dr_i);
    ch.direct_uav_drj = scalar(LinkStream::uav_drj, LinkClass::uav_ground, g.uav, g.dr_j);
    ch.direct_dt_cu = scalar(LinkStream::dt_cu, LinkClass::dt_ground, g.dt, g.cu);
    ch.direct_dt_dri = scalar(LinkStream::dt_dri, LinkClass::dt_ground, g.dt, g.dr_i);
    ch.direct_dt_drj = scalar(LinkStream::dt_drj, LinkClass::dt_ground, g.dt, g.dr_j);
    ch.uav_to_ris = vec(LinkStream::uav_ris, LinkClass::uav_ris, g.uav, g.ris);
    ch.dt_to_ris = vec(LinkStream::dt_ris, LinkClass::dt_ris, g.dt, g.ris);
    ch.ris_to.cu = vec(LinkStream::ris_cu, LinkClass::ris_ground, g.ris, g.cu);
    ch.ris_to.dri = vec(LinkStream::ris_dri, LinkClass::ris_ground, g.ris, g.dr_i);
    ch.ris_to.drj = vec(LinkStream::ris_drj, LinkClass::ris_ground, g.ris, g.dr_j);
    if (g.shared_ris_drop_links) {
        ch.ris_to_uav_path = ch.ris_to;
    } else {
        ch.ris_to_uav_path.cu = vec(LinkStream::ris_cu_uav, LinkClass::ris_ground, g.ris, g.cu);
        ch.ris_to_uav_path.dri = vec(LinkStream::ris_dri_uav, LinkClass::ris_ground, g.ris, g.dr_i);
        ch.ris_to_uav_path.drj = vec(LinkStream::ris_drj_uav, LinkClass::ris_ground, g.ris, g.dr_j);
    }

    // DR_i must be the stronger D2D receiver (zero-phase gain from the DT).
    const PhaseVector zero = PhaseVector::zeros(k);
    if (composite_gain(ch, Transmitter::dt, Receiver::drj, zero) > composite_gain(ch, Transmitter::dt, Receiver::dri, zero)) {
        ch.swap_receivers();
    }
    return ch;
}

}  // namespace risnoma
