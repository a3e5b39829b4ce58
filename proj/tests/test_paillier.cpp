#include <doctest.h>

#include "ppts/paillier.hpp"

using namespace ppts;

TEST_CASE("entropy streams are reproducible and seed-sensitive") {
    Entropy a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) CHECK(a.u64() == b.u64());
    bool differs = false;
    Entropy a2(42);
    for (int i = 0; i < 10; ++i) differs |= a2.u64() != c.u64();
    CHECK(differs);
    Entropy d(1);
    for (int i = 0; i < 100; ++i) {
        mpz_class r = d.below(1000);
        CHECK(r >= 0);
        CHECK(r < 1000);
    }
}

TEST_CASE("keygen produces a working keypair of the requested size") {
    Entropy rng(7);
    auto kp = paillier_keygen(256, rng);
    CHECK(mpz_sizeinbase(kp.pk.n.get_mpz_t(), 2) == 256);
    CHECK(kp.pk.n2 == kp.pk.n * kp.pk.n);
    CHECK((kp.sk.lambda * kp.sk.mu) % kp.pk.n == 1);
    CHECK_THROWS_AS(paillier_keygen(128, rng), ParameterError);
}

TEST_CASE("encryption round-trips across the plaintext range") {
    Entropy rng(11);
    auto kp = paillier_keygen(256, rng);
    for (mpz_class m : {mpz_class(0), mpz_class(1), mpz_class(12345), mpz_class(kp.pk.n - 1)}) {
        CHECK(paillier_decrypt(kp.pk, kp.sk, paillier_encrypt(kp.pk, m, rng)) == m);
    }
    for (int i = 0; i < 20; ++i) {
        mpz_class m = rng.below(kp.pk.n);
        CHECK(paillier_decrypt(kp.pk, kp.sk, paillier_encrypt(kp.pk, m, rng)) == m);
    }
    CHECK_THROWS_AS(paillier_encrypt(kp.pk, kp.pk.n, rng), ParameterError);
    CHECK_THROWS_AS(paillier_encrypt(kp.pk, mpz_class(-1), rng), ParameterError);
}

TEST_CASE("homomorphic addition and scalar multiplication") {
    Entropy rng(13);
    auto kp = paillier_keygen(256, rng);
    for (int i = 0; i < 25; ++i) {
        mpz_class a = rng.below(kp.pk.n), b = rng.below(kp.pk.n);
        auto sum = paillier_add(kp.pk, paillier_encrypt(kp.pk, a, rng),
                                paillier_encrypt(kp.pk, b, rng));
        CHECK(paillier_decrypt(kp.pk, kp.sk, sum) == (a + b) % kp.pk.n);

        mpz_class s = rng.below(1 << 20);
        auto prod = paillier_scalar_mul(kp.pk, paillier_encrypt(kp.pk, a, rng), s);
        CHECK(paillier_decrypt(kp.pk, kp.sk, prod) == (a * s) % kp.pk.n);
    }
}

TEST_CASE("encryption is probabilistic") {
    Entropy rng(17);
    auto kp = paillier_keygen(256, rng);
    auto c1 = paillier_encrypt(kp.pk, 5, rng);
    auto c2 = paillier_encrypt(kp.pk, 5, rng);
    CHECK_FALSE(c1 == c2);
    CHECK(paillier_decrypt(kp.pk, kp.sk, c1) == paillier_decrypt(kp.pk, kp.sk, c2));
}

TEST_CASE("signed decoding recovers negatives") {
    Entropy rng(19);
    auto kp = paillier_keygen(256, rng);
    for (long v : {-1L, -999L, -(1L << 40), 0L, 7L}) {
        mpz_class ring = to_ring(kp.pk, mpz_class(v));
        auto ct = paillier_encrypt(kp.pk, ring, rng);
        CHECK(paillier_decrypt_signed(kp.pk, kp.sk, ct) == v);
    }
    // homomorphic subtraction below zero lands on the signed decode path
    mpz_class three = 3, eight = 8;
    auto diff = paillier_add(kp.pk, paillier_encrypt(kp.pk, three, rng),
                             paillier_encrypt(kp.pk, to_ring(kp.pk, -eight), rng));
    CHECK(paillier_decrypt_signed(kp.pk, kp.sk, diff) == -5);
}

TEST_CASE("big integers serialize big-endian and round-trip") {
    for (mpz_class v :
         {mpz_class(0), mpz_class(1), mpz_class(0x1234567), mpz_class(mpz_class(1) << 200)}) {
        auto bytes = mpz_to_bytes(v);
        CHECK(mpz_from_bytes(bytes.data(), bytes.size()) == v);
    }
    auto b = mpz_to_bytes(mpz_class(0x0102));
    CHECK(b == std::vector<std::uint8_t>{1, 2});
    CHECK(mpz_to_bytes(mpz_class(0)) == std::vector<std::uint8_t>{0});
    CHECK_THROWS_AS(mpz_to_bytes(mpz_class(-3)), ParameterError);
}
