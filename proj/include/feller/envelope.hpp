/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "feller/symbol.hpp"

namespace feller {

enum class EnvelopeProvenance { closed_form, grid };

/* How the symbol behaves outside the sampled state box. */
enum class TailFlag { none, periodic, constant_at_infinity, closed_form };

std::string to_string(EnvelopeProvenance p);
std::string to_string(TailFlag t);
TailFlag tail_flag_from_string(const std::string& s);

struct XDomain {
  Vector lower;
  Vector upper;
  int resolution = 0;  // grid points per axis; 0 picks 64 / 32 / 16 for d = 1 / 2 / 3
  TailFlag tail = TailFlag::none;
  int refinement_rounds = 3;  // cyclic golden-section passes around the grid optimum
};

struct EnvelopeValues {
  double q_inf = 0.0;   // inf_z Re p(z, xi)
  double q_sup = 0.0;   // sup_z |p(z, xi)|
  double re_sup = 0.0;  // sup_z Re p(z, xi)
  double im_sup = 0.0;  // sup_z |Im p(z, xi)|
};

using EnvelopeFunction = std::function<EnvelopeValues(const Vector& xi)>;

/**
 * Lower/upper envelopes of a symbol over the state variable. Values are
 * computed lazily per frequency and memoised; queries are safe from many
 * threads.
 */
class Envelope {
public:
  Envelope() = default;
  Envelope(int dimension, EnvelopeProvenance provenance, bool radial, EnvelopeFunction fn, std::string description);

  EnvelopeValues at(const Vector& xi) const;
  double q_inf(const Vector& xi) const { return at(xi).q_inf; }
  double q_sup(const Vector& xi) const { return at(xi).q_sup; }
  double re_sup(const Vector& xi) const { return at(xi).re_sup; }
  double im_sup(const Vector& xi) const { return at(xi).im_sup; }

  /* q_inf along the first axis at |xi| = r; exact for radial envelopes. */
  double q_inf_radial(double r) const;

  /* Supremum of |p| over the frequency ball of radius rho (sampled on spheres). */
  double ball_sup(double rho) const;

  int dimension() const { return dimension_; }
  EnvelopeProvenance provenance() const { return provenance_; }
  bool radial() const { return radial_; }
  const std::string& description() const { return description_; }

  /* Grid envelopes over-estimate the infimum, so verdicts built on them may be optimistic. */
  bool optimistic_caveat() const { return provenance_ == EnvelopeProvenance::grid; }

  explicit operator bool() const { return static_cast<bool>(fn_); }

private:
  struct Cache;
  int dimension_ = 1;
  EnvelopeProvenance provenance_ = EnvelopeProvenance::closed_form;
  bool radial_ = false;
  EnvelopeFunction fn_;
  std::string description_;
  std::shared_ptr<Cache> cache_;
};

/**
 * Envelope of `model`. Stable-like and x-independent models get the closed
 * form unless `force_grid`; otherwise the state box is scanned on a grid and
 * each optimum refined by golden-section search. A model that depends on x
 * without a tail flag is rejected with ConfigError.
 */
Envelope build_envelope(const SymbolModel& model, const XDomain& domain, bool force_grid = false);

/* Closed-form stable-like envelope: |xi|^amax / |xi|^amin below / above |xi| = 1. */
Envelope stable_like_envelope(int d, double alpha_min, double alpha_max);

/* User-supplied closed-form envelope (tail flag closed_form). */
Envelope closed_form_envelope(int d, EnvelopeFunction fn, bool radial, std::string description);

}  // namespace feller
