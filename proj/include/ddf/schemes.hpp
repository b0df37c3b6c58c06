// schemes.hpp - Relaying scheme composers for the DDF protocol.
//
// Each scheme maps (frame config, relay activation, fading realization, link
// budget) to a BlockProfile: the list of homogeneous codeword segments, each
// with a bit count, a constellation order and a post-processing effective
// scalar SNR. The profile is everything the Monte Carlo engine needs to
// accumulate mutual information.
//
// Patching: the relay combines already-sent phase-1 symbols with current
// phase-2 symbols into higher-order "hyper-symbols"; the destination linearly
// recombines its received signals to rebuild the hyper-symbol on a combined
// channel. Coefficients a_i = sqrt(3 / (2^mR - 1)) * 2^(i-1).

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddf/channel.hpp"
#include "ddf/constellation.hpp"
#include "ddf/frame.hpp"

namespace ddf {

enum class SchemeKind {
    direct,
    monostream,
    monostream_adapted_mod,
    patched_monostream,
    patched_monostream_mu,
    dist_alamouti,
    alamouti_adapted_mod,
    patched_alamouti,
    patched_golden,
    patched_silver,
};

struct SchemeId {
    SchemeKind kind = SchemeKind::direct;
    int relay_order_bits = 2;                  // m_R for patched/adapted kinds
    // Patched time-slots for patched_monostream; nullopt = patch the whole
    // second phase. Ignored by the other kinds (MU derives its own count).
    std::optional<long long> patched_slots;
    // Replace the finite alphabet by a Gaussian input (baseline curves).
    bool gaussian_alphabet = false;

    // Constellation orders this scheme can ask the engine to look up.
    std::vector<int> required_orders(const FrameConfig& frame) const;

    bool outage_supported() const {
        return kind != SchemeKind::patched_golden && kind != SchemeKind::patched_silver;
    }

    std::string name() const;
};

const char* scheme_kind_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme_kind(const std::string& name);

// One homogeneous segment of the codeword under one fading realization.
struct Block {
    long long bits = 0;
    int order_bits = 0;
    double eff_snr = 0.0;
};

struct BlockProfile {
    std::vector<Block> blocks;

    long long total_bits() const;
};

// ---- Effective channel composition ----------------------------------------

struct ActiveLinks {
    bool source = false;
    bool relay = false;
};

// Coherent sum over the active transmitters: sum of sqrt(SNR_j) * h_j per
// receive antenna. An empty active set yields the zero vector (silence).
std::vector<std::complex<double>> compose_monostream(const FadingDraw& draw,
                                                     const LinkBudget& budget,
                                                     ActiveLinks active);

// n-relay generalization: coherent sum of arbitrary (snr, fading) links.
std::vector<std::complex<double>> coherent_sum(
    std::span<const std::pair<double, std::span<const std::complex<double>>>> links, int n_rx);

// Post-Alamouti-receiver per-symbol SNR: SNR_SD ||h_sd||^2 + SNR_RD ||h_rd||^2.
double compose_alamouti_snr(const FadingDraw& draw, const LinkBudget& budget);

// ---- Patching algebra ------------------------------------------------------

struct PatchCoefficients {
    std::vector<double> a;  // a_i = sqrt(3 / (2^mR - 1)) * 2^(i-1), i = 1..mR/mS

    double last() const { return a.back(); }
    std::size_t count() const { return a.size(); }
};

PatchCoefficients patch_coefficients(int source_order_bits, int relay_order_bits);

// Hyper-symbol z = sum a_i x_i. Inputs must belong to the source alphabet;
// with a QPSK source the result lands exactly on the unit-energy 2^mR QAM.
std::complex<double> patch_symbol(std::span<const std::complex<double>> x,
                                  const PatchCoefficients& a, int source_order_bits);

// Destination-side recombination: sum a_i y1_i + a_last * y2. Noiseless inputs
// reproduce z * (sqrt(SNR_SD) h_sd + a_last sqrt(SNR_RD) h_rd) exactly.
std::vector<std::complex<double>> patch_combine_rx(
    std::span<const std::vector<std::complex<double>>> y_phase1,
    std::span<const std::complex<double>> y_phase2, const PatchCoefficients& a);

// ---- Distributed space-time constructions ----------------------------------

// Relay stream of the distributed Alamouti scheme. x_phase2 are the source's
// second-phase symbols; k is the 1-based phase-2 time-slot index. Odd slots
// carry -conj(x_phase2[k+1]), even slots +conj(x_phase2[k-1]).
std::complex<double> alamouti_relay_symbols(std::span<const std::complex<double>> x_phase2,
                                            int k);

// Patched Alamouti relay pair for one two-slot group. x_phase1 holds the
// 2*(mR/mS - 1) phase-1 symbols being patched, x_phase2 the two current
// source symbols.
std::pair<std::complex<double>, std::complex<double>> patched_alamouti_encode(
    std::span<const std::complex<double>> x_phase1,
    std::span<const std::complex<double>, 2> x_phase2, const PatchCoefficients& a);

// Destination combination producing an Alamouti codeword in the hyper-symbols
// over g1 = sqrt(SNR_SD) h_sd and g2 = a_last sqrt(SNR_RD) h_rd.
std::pair<std::vector<std::complex<double>>, std::vector<std::complex<double>>>
patched_alamouti_combine(std::span<const std::vector<std::complex<double>>> y_phase1,
                         std::span<const std::vector<std::complex<double>>, 2> y_phase2,
                         const PatchCoefficients& a);

enum class DstbcCode { golden, silver };

// Relay symbols (z_R1, z_R2) for the Patched Golden / Patched Silver schemes;
// z1, z2 are the two hyper-symbols built from phase-1 symbols, x21 and x22 the
// source's two phase-2 symbols.
std::pair<std::complex<double>, std::complex<double>> patched_dstbc_encode(
    DstbcCode code, std::complex<double> z1, std::complex<double> z2,
    std::complex<double> x21, std::complex<double> x22);

// N_r x 2 matrices stored column-major as two column vectors.
struct RxMatrix {
    std::vector<std::complex<double>> col1;
    std::vector<std::complex<double>> col2;
};

struct DstbcCombineResult {
    RxMatrix y;
    double c;  // 1/sqrt(2)
};

// Destination combination building the space-time codeword: noiseless inputs
// give y = c [h_sd h_rd] X_code when both nodes transmit at power 1/2.
DstbcCombineResult patched_dstbc_combine(DstbcCode code, const RxMatrix& y1_tilde,
                                         const RxMatrix& y2);

// ---- Per-realization block decomposition -----------------------------------

// Decompose the codeword through sub-frame `horizon` into MI-accumulation
// blocks. first_relay_subframe is the index of the first sub-frame during
// which the relay transmits (decoding finished at the end of the previous
// one); nullopt means the relay stays silent. A relay whose data link is off
// reduces every scheme to the direct profile.
BlockProfile block_profile(const SchemeId& scheme, const FrameConfig& frame,
                           std::optional<int> first_relay_subframe, int horizon,
                           const FadingDraw& draw, const LinkBudget& budget);

// Smallest even order m' >= m_S such that phase-2 symbol count * m' >= K,
// capped at 64-QAM. Used by the modulation-adaptation schemes.
int adapted_phase2_order(const FrameConfig& frame, int first_relay_subframe);

}  // namespace ddf
