import hashlib

import ecdsa
import pytest
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from ecdsa.rfc6979 import generate_k
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_ecdsa.algebra import (
    EVALUATION_POINTS,
    SECP256K1,
    CurveConfig,
    Signature,
    SigningError,
    ecdsa_sign,
    ecdsa_verify,
    lagrange_weight,
)
from threshold_ecdsa.numtheory import seeded_rng

Q = SECP256K1.q
P256 = CurveConfig("P-256")

scalars = st.integers(min_value=1, max_value=Q - 1)


def test_hash_to_scalar_matches_sha256_of_abc():
    # FIPS 180-2 digest of "abc"; below q so the reduction is a no-op
    digest = 0xBA7816BF8F01CFEA414140DE5DAE2223B00361A396177A9CB410FF61F20015AD
    assert SECP256K1.hash_to_scalar(b"abc") == digest % Q


def test_secp256k1_known_signature():
    # widely published vector: d = 1, RFC 6979 nonce, low-s form
    msg = b"Satoshi Nakamoto"
    k_std = generate_k(Q, 1, hashlib.sha256, hashlib.sha256(msg).digest())
    sig = ecdsa_sign(1, msg, pow(k_std, -1, Q)).normalized()
    assert sig.r == 0x934B1EA10A4B3C1757E2B0C017D0B6143CE3C9A7E6A4A49860D7A6AB210EE3D8
    assert sig.s == 0x2442CE9D2B916064108014783E923EC36B49743E2FFA1C4496F01A512AAFD9E5


def test_p256_rfc6979_sample_vector():
    x = 0xC9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721
    k = 0xA6E3C57DD01ABE90086538398355DD4C3B17AA873382B0F24D6129493D8AAD60
    q = P256.q
    assert P256.base_mul(x).x == 0x60FED4BA255A9D31C961EB74C6356D68C049B8923B61FA6CE669622E60F29FB6
    # the package's nonce is the inverse of the standard one
    sig = ecdsa_sign(x, b"sample", pow(k, -1, q), P256)
    assert sig.r == 0xEFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716
    assert sig.s == 0xF7CB1C942D657C41D436C7A1B6E29F65F3E900DBB9AFF4064DC4AB2F843ACDA8


def _external_verify(pub, msg, sig, curve=ec.SECP256K1()):
    x, y = pub.affine()
    key = ec.EllipticCurvePublicNumbers(x, y, curve).public_key()
    try:
        key.verify(sig.to_der(), msg, ec.ECDSA(hashes.SHA256()))
        return True
    except InvalidSignature:
        return False


@settings(max_examples=30, deadline=None)
@given(d=scalars, k=scalars, msg=st.binary(max_size=64))
def test_sign_verify_agrees_with_external_verifier(d, k, msg):
    try:
        sig = ecdsa_sign(d, msg, k)
    except SigningError:
        return
    pub = SECP256K1.base_mul(d)
    assert ecdsa_verify(pub, msg, sig)
    assert _external_verify(pub, msg, sig)
    assert ecdsa_verify(pub, msg, sig.normalized())
    bad = Signature(sig.r, (sig.s + 1) % Q or 1)
    assert not ecdsa_verify(pub, msg, bad)
    assert not _external_verify(pub, msg, bad)


def test_verify_rejects_out_of_range_values():
    pub = SECP256K1.base_mul(5)
    for r, s in ((0, 1), (1, 0), (Q, 1), (1, Q)):
        assert not ecdsa_verify(pub, b"m", Signature(r, s))
    assert not ecdsa_verify(SECP256K1.identity, b"m", Signature(1, 1))


def test_signature_encodings_roundtrip():
    sig = ecdsa_sign(7, b"x", 11)
    assert Signature.from_bytes(sig.to_bytes()) == sig
    assert Signature.from_der(sig.to_der()) == sig
    low = sig.normalized()
    assert low.s <= Q // 2 and low.normalized() == low


def test_lagrange_weights_by_hand():
    two, three, one = EVALUATION_POINTS[1], EVALUATION_POINTS[2], EVALUATION_POINTS[3]
    assert (two, three, one) == (2, 3, 1)
    half = pow(2, -1, Q)
    assert lagrange_weight((2, 3), 0) == 3
    assert lagrange_weight((2, 3), 1) == Q - 2
    assert lagrange_weight((1, 2), 0) == 2
    assert lagrange_weight((1, 2), 1) == Q - 1
    assert lagrange_weight((1, 3), 0) == 3 * half % Q
    assert lagrange_weight((1, 3), 1) == -half % Q
    with pytest.raises(ValueError):
        lagrange_weight((2, 2), 0)


@settings(max_examples=100, deadline=None)
@given(
    a=st.integers(0, Q - 1),
    m=st.integers(0, Q - 1),
    pair=st.sampled_from([(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)]),
)
def test_lagrange_interpolates_any_line(a, m, pair):
    f = lambda x: (a + m * x) % Q  # noqa: E731
    l0, l1 = lagrange_weight(pair, 0), lagrange_weight(pair, 1)
    assert (l0 * f(pair[0]) + l1 * f(pair[1])) % Q == a


@settings(max_examples=50, deadline=None)
@given(a=scalars, b=scalars)
def test_point_arithmetic_is_a_group(a, b):
    A, B = SECP256K1.base_mul(a), SECP256K1.base_mul(b)
    assert A + B == SECP256K1.base_mul(a + b)
    assert A - A == SECP256K1.identity
    assert (A + SECP256K1.identity) == A
    assert SECP256K1.decode_point(A.encode()) == A
    assert Q * A == SECP256K1.identity


def test_point_encoding_rejects_garbage():
    G = SECP256K1.generator
    enc = G.encode()
    assert SECP256K1.decode_point(SECP256K1.identity.encode()).is_identity
    for bad in (enc[:-1], b"\x04" + enc[1:], b"\x02" + b"\xff" * 32):
        with pytest.raises(ValueError):
            SECP256K1.decode_point(bad)


def test_scalar_codec_is_strict():
    assert SECP256K1.decode_scalar(SECP256K1.encode_scalar(Q - 1)) == Q - 1
    with pytest.raises(ValueError):
        SECP256K1.decode_scalar(Q.to_bytes(32, "big"))
    with pytest.raises(ValueError):
        SECP256K1.encode_scalar(Q)


def test_random_scalars_are_roughly_uniform():
    # chi-square on the top four bits; 15 degrees of freedom, p = 0.001 cut-off
    rng = seeded_rng("uniform")
    n, buckets = 8000, 16
    counts = [0] * buckets
    for _ in range(n):
        counts[SECP256K1.random_scalar(rng) * buckets // Q] += 1
    expected = n / buckets
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    assert chi2 < 37.7


def test_ecdsa_library_agrees_on_public_keys():
    d = 0x1234567890ABCDEF
    vk = ecdsa.SigningKey.from_secret_exponent(d, curve=ecdsa.SECP256k1).get_verifying_key()
    assert vk.to_string("compressed") == SECP256K1.base_mul(d).encode()
