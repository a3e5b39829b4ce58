#ifndef PPTS_PAILLIER_HPP
#define PPTS_PAILLIER_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "ppts/graph.hpp"  // ParameterError

namespace ppts {

struct CryptoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seedable entropy handle; seeded streams give reproducible protocol runs,
// an OS-entropy seed is drawn when none is supplied.
class Entropy {
public:
    explicit Entropy(std::uint64_t seed) { init(seed); }
    Entropy() {
        std::random_device rd;
        init((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    }
    Entropy(const Entropy&) = delete;
    Entropy& operator=(const Entropy&) = delete;
    ~Entropy() { gmp_randclear(state_); }

    // uniform in [0, bound)
    mpz_class below(const mpz_class& bound) {
        mpz_class r;
        mpz_urandomm(r.get_mpz_t(), state_, bound.get_mpz_t());
        return r;
    }
    mpz_class bits(unsigned n) {
        mpz_class r;
        mpz_urandomb(r.get_mpz_t(), state_, n);
        return r;
    }
    std::uint64_t u64() {
        mpz_class r = bits(64);
        std::uint64_t lo = mpz_get_ui(r.get_mpz_t());
        mpz_class hi = r >> 32;
        return (static_cast<std::uint64_t>(mpz_get_ui(hi.get_mpz_t())) << 32) |
               (lo & 0xffffffffULL);
    }

private:
    void init(std::uint64_t seed) {
        gmp_randinit_mt(state_);
        gmp_randseed_ui(state_, seed);
    }
    gmp_randstate_t state_;
};

struct PaillierPublicKey {
    mpz_class n;    // modulus, product of two primes; generator is fixed at n+1
    mpz_class n2;   // n^2
    unsigned bits = 0;
};

struct PaillierPrivateKey {
    mpz_class lambda;  // lcm(p-1, q-1)
    mpz_class mu;      // lambda^{-1} mod n, valid for g = n+1
};

struct Ciphertext {
    mpz_class value;  // in [0, n^2)
    bool operator==(const Ciphertext&) const = default;
};

struct PaillierKeypair {
    PaillierPublicKey pk;
    PaillierPrivateKey sk;
};

namespace detail {
inline mpz_class random_prime(unsigned bits, Entropy& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        mpz_class cand = rng.bits(bits);
        mpz_setbit(cand.get_mpz_t(), bits - 1);  // pin the top bit
        mpz_setbit(cand.get_mpz_t(), 0);
        mpz_class p;
        mpz_nextprime(p.get_mpz_t(), cand.get_mpz_t());
        if (mpz_sizeinbase(p.get_mpz_t(), 2) == bits) return p;
    }
    throw CryptoError("prime generation failed");
}
}  // namespace detail

inline Ciphertext paillier_encrypt(const PaillierPublicKey& pk, const mpz_class& m,
                                   Entropy& rng) {
    if (m < 0 || m >= pk.n) throw ParameterError("plaintext out of range");
    mpz_class r;
    do {
        r = rng.below(pk.n);
    } while (r == 0);
    // g = n+1: g^m = 1 + m*n (mod n^2)
    mpz_class gm = (1 + m * pk.n) % pk.n2;
    mpz_class rn;
    mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t(), pk.n2.get_mpz_t());
    return Ciphertext{(gm * rn) % pk.n2};
}

inline mpz_class paillier_decrypt(const PaillierPublicKey& pk, const PaillierPrivateKey& sk,
                                  const Ciphertext& c) {
    if (c.value < 0 || c.value >= pk.n2) throw CryptoError("ciphertext out of range");
    mpz_class u;
    mpz_powm(u.get_mpz_t(), c.value.get_mpz_t(), sk.lambda.get_mpz_t(), pk.n2.get_mpz_t());
    mpz_class l = (u - 1) / pk.n;
    return (l * sk.mu) % pk.n;
}

// Signed ring decoding: values above n/2 represent negatives. Needed because
// share arithmetic subtracts random masks.
inline mpz_class paillier_decrypt_signed(const PaillierPublicKey& pk,
                                         const PaillierPrivateKey& sk, const Ciphertext& c) {
    mpz_class v = paillier_decrypt(pk, sk, c);
    if (v > pk.n / 2) v -= pk.n;
    return v;
}

inline mpz_class to_ring(const PaillierPublicKey& pk, const mpz_class& v) {
    mpz_class r = v % pk.n;
    if (r < 0) r += pk.n;
    return r;
}

// Homomorphic addition: E(a) * E(b) = E(a+b mod n).
inline Ciphertext paillier_add(const PaillierPublicKey& pk, const Ciphertext& a,
                               const Ciphertext& b) {
    return Ciphertext{(a.value * b.value) % pk.n2};
}

// Homomorphic scalar multiply: E(a)^s = E(s*a mod n).
inline Ciphertext paillier_scalar_mul(const PaillierPublicKey& pk, const Ciphertext& c,
                                      const mpz_class& s) {
    mpz_class e = to_ring(pk, s);
    Ciphertext out;
    mpz_powm(out.value.get_mpz_t(), c.value.get_mpz_t(), e.get_mpz_t(), pk.n2.get_mpz_t());
    return out;
}

inline PaillierKeypair paillier_keygen(unsigned bits, Entropy& rng) {
    if (bits < 256) throw ParameterError("key size below 256 bits");
    for (int attempt = 0; attempt < 100; ++attempt) {
        mpz_class p = detail::random_prime(bits / 2, rng);
        mpz_class q = detail::random_prime(bits - bits / 2, rng);
        if (p == q) continue;
        mpz_class n = p * q;
        if (mpz_sizeinbase(n.get_mpz_t(), 2) != bits) continue;
        PaillierKeypair kp;
        kp.pk.n = n;
        kp.pk.n2 = n * n;
        kp.pk.bits = bits;
        mpz_class pm1 = p - 1, qm1 = q - 1;
        mpz_lcm(kp.sk.lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
        if (mpz_invert(kp.sk.mu.get_mpz_t(), kp.sk.lambda.get_mpz_t(), n.get_mpz_t()) == 0)
            continue;
        // keygen self-test: roundtrip three random plaintexts
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i) {
            mpz_class m = rng.below(n);
            ok = paillier_decrypt(kp.pk, kp.sk, paillier_encrypt(kp.pk, m, rng)) == m;
        }
        if (ok) return kp;
    }
    throw CryptoError("keygen failed after bounded retries");
}

// Big-endian byte serialization used inside protocol messages.
inline std::vector<std::uint8_t> mpz_to_bytes(const mpz_class& v) {
    if (v < 0) throw ParameterError("cannot serialize negative value");
    std::size_t count = 0;
    std::vector<std::uint8_t> buf((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
    if (buf.empty()) buf.resize(1);
    mpz_export(buf.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    if (count == 0) buf.assign(1, 0);
    return buf;
}

inline mpz_class mpz_from_bytes(const std::uint8_t* data, std::size_t len) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, data);
    return v;
}

}  // namespace ppts

#endif
