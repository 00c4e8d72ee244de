// Copyright 2026 The bosonic-saddle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BOSONIC_SRC_MP_COMPLEX_HPP
#define BOSONIC_SRC_MP_COMPLEX_HPP

#include <gmp.h>
#include <mpfr.h>

#include <complex>
#include <cstdint>

#include "bosonic/log_complex.hpp"

namespace bosonic::detail {

// Minimal RAII complex number over MPFR, enough for the Ryser kernel.
class MpComplex {
   public:
    explicit MpComplex(mpfr_prec_t prec) {
        mpfr_init2(re_, prec);
        mpfr_init2(im_, prec);
        mpfr_init2(t0_, prec);
        mpfr_init2(t1_, prec);
        mpfr_set_zero(re_, 1);
        mpfr_set_zero(im_, 1);
    }
    MpComplex(const MpComplex &other) : MpComplex(mpfr_get_prec(other.re_)) {
        mpfr_set(re_, other.re_, MPFR_RNDN);
        mpfr_set(im_, other.im_, MPFR_RNDN);
    }
    MpComplex &operator=(const MpComplex &other) {
        if (this != &other) {
            mpfr_set(re_, other.re_, MPFR_RNDN);
            mpfr_set(im_, other.im_, MPFR_RNDN);
        }
        return *this;
    }
    ~MpComplex() {
        mpfr_clear(re_);
        mpfr_clear(im_);
        mpfr_clear(t0_);
        mpfr_clear(t1_);
    }

    void set(std::complex<double> z) {
        mpfr_set_d(re_, z.real(), MPFR_RNDN);
        mpfr_set_d(im_, z.imag(), MPFR_RNDN);
    }
    void set_zero() {
        mpfr_set_zero(re_, 1);
        mpfr_set_zero(im_, 1);
    }
    void add(const MpComplex &b) {
        mpfr_add(re_, re_, b.re_, MPFR_RNDN);
        mpfr_add(im_, im_, b.im_, MPFR_RNDN);
    }
    void sub(const MpComplex &b) {
        mpfr_sub(re_, re_, b.re_, MPFR_RNDN);
        mpfr_sub(im_, im_, b.im_, MPFR_RNDN);
    }
    // this += k * b for an integer k.
    void add_scaled(const MpComplex &b, long k) {
        mpfr_mul_si(t0_, b.re_, k, MPFR_RNDN);
        mpfr_add(re_, re_, t0_, MPFR_RNDN);
        mpfr_mul_si(t0_, b.im_, k, MPFR_RNDN);
        mpfr_add(im_, im_, t0_, MPFR_RNDN);
    }
    void mul(const MpComplex &b) {
        // (a + ib)(c + id) = (ac - bd) + i(ad + bc)
        mpfr_mul(t0_, re_, b.re_, MPFR_RNDN);
        mpfr_mul(t1_, im_, b.im_, MPFR_RNDN);
        mpfr_mul(im_, im_, b.re_, MPFR_RNDN);
        mpfr_fma(im_, re_, b.im_, im_, MPFR_RNDN);
        mpfr_sub(re_, t0_, t1_, MPFR_RNDN);
    }
    void mul_real(const mpfr_t r) {
        mpfr_mul(re_, re_, r, MPFR_RNDN);
        mpfr_mul(im_, im_, r, MPFR_RNDN);
    }
    void neg() {
        mpfr_neg(re_, re_, MPFR_RNDN);
        mpfr_neg(im_, im_, MPFR_RNDN);
    }

    // Upper estimate of |z| as long double.
    long double abs_estimate() const {
        long double a = mpfr_get_ld(re_, MPFR_RNDN);
        long double b = mpfr_get_ld(im_, MPFR_RNDN);
        return std::abs(a) + std::abs(b);
    }

    LogComplex to_log_complex() const {
        if (mpfr_zero_p(re_) && mpfr_zero_p(im_)) {
            return LogComplex::zero();
        }
        long er = 0;
        long ei = 0;
        double dr = mpfr_zero_p(re_) ? 0.0 : mpfr_get_d_2exp(&er, re_, MPFR_RNDN);
        double di = mpfr_zero_p(im_) ? 0.0 : mpfr_get_d_2exp(&ei, im_, MPFR_RNDN);
        if (mpfr_zero_p(re_)) {
            er = ei;
        }
        if (mpfr_zero_p(im_)) {
            ei = er;
        }
        long e = std::max(er, ei);
        std::complex<double> mant(std::ldexp(dr, static_cast<int>(std::max(er - e, -2000L))),
                                  std::ldexp(di, static_cast<int>(std::max(ei - e, -2000L))));
        return LogComplex::from_scaled(mant, e);
    }

   private:
    mpfr_t re_;
    mpfr_t im_;
    mpfr_t t0_;
    mpfr_t t1_;
};

// RAII real used for exact binomial weights.
class MpReal {
   public:
    explicit MpReal(mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
    }
    MpReal(const MpReal &other) : MpReal(mpfr_get_prec(other.v_)) {
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    MpReal &operator=(const MpReal &) = delete;
    ~MpReal() {
        mpfr_clear(v_);
    }
    mpfr_ptr get() {
        return v_;
    }
    mpfr_srcptr get() const {
        return v_;
    }

   private:
    mpfr_t v_;
};

}  // namespace bosonic::detail

#endif
