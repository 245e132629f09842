#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace edgeho {

// One UE's handover state: trigger time and decoded-token count.
struct UEContext {
    int id = 0;
    double tau = 0.0;            // HO trigger time [s]
    std::int64_t c_tokens = 0;   // tokens decoded before tau
};

// An ordered set of UEs taking part in the same handover episode.
// UEs are kept sorted by trigger time (ties broken by id).
class Instance {
public:
    explicit Instance(std::vector<UEContext> ues) : ues_(std::move(ues)) {
        if (ues_.empty()) throw std::invalid_argument("Instance: needs at least one UE");
        for (const auto& ue : ues_) {
            if (ue.tau < 0.0) throw std::invalid_argument("Instance: negative trigger time");
            if (ue.c_tokens < 0) throw std::invalid_argument("Instance: negative token count");
        }
        std::stable_sort(ues_.begin(), ues_.end(), [](const UEContext& a, const UEContext& b) {
            if (a.tau != b.tau) return a.tau < b.tau;
            return a.id < b.id;
        });
        for (const auto& ue : ues_) c_max_ = std::max(c_max_, ue.c_tokens);
    }

    const std::vector<UEContext>& ues() const { return ues_; }
    std::size_t size() const { return ues_.size(); }
    const UEContext& operator[](std::size_t i) const { return ues_[i]; }
    std::int64_t c_max() const { return c_max_; }
    double tau_first() const { return ues_.front().tau; }
    double tau_last() const { return ues_.back().tau; }

private:
    std::vector<UEContext> ues_;
    std::int64_t c_max_ = 0;
};

// Affine batch-prefill delay model p(L) = a*L + b, plus the cycle interval.
struct PrefillProfile {
    double a = 9.4267e-5;   // [s/token]
    double b = 2.4e-3;      // [s]
    double t_cycle = 0.01;  // batch cycle interval [s]

    double delay(double l) const { return a * l + b; }

    void validate() const {
        if (a < 0.0 || b < 0.0 || t_cycle <= 0.0)
            throw std::invalid_argument("PrefillProfile: a,b >= 0 and t_cycle > 0 required");
    }
};

// Model geometry that fixes the KV payload size per token.
struct KVCacheSpec {
    int n_layers = 28;
    int n_kv_heads = 4;
    int head_dim = 128;
    int precision_bits = 16;
};

// Per-token KV payload: 2 * layers * kv_heads * head_dim * precision (key and value tensors).
inline std::uint64_t kv_bits_per_token(const KVCacheSpec& spec) {
    if (spec.n_layers <= 0 || spec.n_kv_heads <= 0 || spec.head_dim <= 0 || spec.precision_bits <= 0)
        throw std::invalid_argument("KVCacheSpec: all fields must be positive");
    return 2ull * static_cast<std::uint64_t>(spec.n_layers) *
           static_cast<std::uint64_t>(spec.n_kv_heads) *
           static_cast<std::uint64_t>(spec.head_dim) *
           static_cast<std::uint64_t>(spec.precision_bits);
}

// Inter-BS link carrying KV payloads.
struct BackhaulLink {
    double capacity_bps = 4.5e9;
    double kv_bits_per_token = 458752.0;
};

// Link capacity expressed in KV tokens per second.
inline double normalized_rate(const BackhaulLink& link) {
    if (link.capacity_bps <= 0.0 || link.kv_bits_per_token <= 0.0)
        throw std::invalid_argument("BackhaulLink: capacity and payload size must be positive");
    return link.capacity_bps / link.kv_bits_per_token;
}

// How one UE's context tokens divide between batch prefill and backhaul transfer.
// Real-valued because the shared prefill length is optimized as a continuous variable.
struct TokenSplit {
    double n_prefill = 0.0;
    double n_transfer = 0.0;
};

inline TokenSplit token_split(const UEContext& ue, double l) {
    if (l < 0.0) throw std::invalid_argument("token_split: negative prefill length");
    const double c = static_cast<double>(ue.c_tokens);
    return TokenSplit{std::min(c, l), std::max(c - l, 0.0)};
}

}  // namespace edgeho
