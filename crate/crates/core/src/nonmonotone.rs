//! Reference values `T_k` for the nonmonotone acceptance ratio.
//!
//! Every strategy keeps its own running scalars, but they share the window of
//! accepted objective values and the bookkeeping for the running maximum
//! `f_{l(k)} = max_{0 ≤ j ≤ m(k)} f_{k-j}` with `m(k) = min(k, N)`.
//!
//! The two windowed convex terms are built on
//!
//! ```text
//! T̄_k = (1-η_{k-1}) f_k + η_{k-1}(1-η_{k-2}) f_{k-1} + … + η_{k-1}⋯η_{k-L+1} f_{k-L+1}
//! ```
//!
//! over the last `L = min(k+1, N+1)` accepted values. The weights are
//! nonnegative and sum to one. The state updates `T̄` with the O(1) recursion
//! in [`tbar_recursive_step`]; [`tbar_direct`] evaluates the sum and serves as
//! its reference.

use std::collections::VecDeque;

use thiserror::Error;

use crate::config::Strategy;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonmonotoneError {
    #[error("eta must lie in [0, 1), got {0}")]
    EtaOutOfRange(f64),
    #[error("accepted objective value must be finite, got {0}")]
    NonFiniteValue(f64),
    #[error("window mismatch: {f_len} values need {} weights, got {eta_len}", .f_len.saturating_sub(1))]
    WindowMismatch { f_len: usize, eta_len: usize },
    #[error("empty window")]
    EmptyWindow,
}

/// Next weight of the averaging schedule.
///
/// `η_1 = η_0 / 2` and `η_k = (η_{k-1} + η_{k-2}) / 2` for `k ≥ 2`. For
/// `k = 1` only `eta_prev` (which is `η_0`) is used.
pub fn eta_schedule(eta_prev: f64, eta_prev2: f64, k: usize) -> f64 {
    assert!(k >= 1, "schedule starts at k = 1");
    if k == 1 {
        eta_prev / 2.0
    } else {
        (eta_prev + eta_prev2) / 2.0
    }
}

/// Weights of the windowed convex combination, oldest value first.
///
/// `eta` holds the weights between consecutive values, oldest first, so a
/// window of `L` values takes `L - 1` weights and yields `L` coefficients.
pub fn convex_weights(eta: &[f64]) -> Vec<f64> {
    let len = eta.len() + 1;
    let mut w = vec![0.0; len];
    // Walk from the newest value back, carrying the product of the weights
    // seen so far.
    let mut carry = 1.0;
    for i in (1..len).rev() {
        let e = eta[i - 1];
        w[i] = carry * (1.0 - e);
        carry *= e;
    }
    w[0] = carry;
    w
}

/// Evaluates `T̄_k` directly from the window (oldest first).
pub fn tbar_direct(f_window: &[f64], eta_window: &[f64]) -> Result<f64, NonmonotoneError> {
    if f_window.is_empty() {
        return Err(NonmonotoneError::EmptyWindow);
    }
    if eta_window.len() + 1 != f_window.len() {
        return Err(NonmonotoneError::WindowMismatch {
            f_len: f_window.len(),
            eta_len: eta_window.len(),
        });
    }
    Ok(convex_weights(eta_window)
        .iter()
        .zip(f_window)
        .map(|(w, f)| w * f)
        .sum())
}

/// One step of the `T̄` recursion:
///
/// `T̄_k = (1-η_{k-1}) f_k + η_{k-1} T̄_{k-1} + ξ_k (f_{k-N} - f_{k-N-1})`.
///
/// While the window is still growing (`k ≤ N`) there is no value leaving it;
/// pass `xi = 0` (or equal `f_out`, `f_out_prev`) to get the two-term form.
pub fn tbar_recursive_step(
    tbar_prev: f64,
    f_new: f64,
    eta_new: f64,
    xi: f64,
    f_out: f64,
    f_out_prev: f64,
) -> f64 {
    let base = (1.0 - eta_new) * f_new + eta_new * tbar_prev;
    if xi == 0.0 {
        base
    } else {
        base + xi * (f_out - f_out_prev)
    }
}

/// Running state for one reference-value strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct NonmonotoneState {
    strategy: Strategy,
    window_n: usize,
    /// Accepted-step counter `k`.
    k: usize,
    /// Last `min(k+1, N+1)` accepted values, newest last.
    f_window: VecDeque<f64>,
    /// Last `N+1` weights passed to [`Self::update`], newest last.
    eta_window: VecDeque<f64>,
    tbar: f64,
    xi: f64,
    zh_c: f64,
    zh_q: f64,
    mo_d: f64,
    amini_r: f64,
    flk: f64,
}

impl NonmonotoneState {
    /// Fresh state at `k = 0`; the reference value is `f0` for every strategy.
    pub fn new(strategy: Strategy, f0: f64, window_n: usize) -> Self {
        assert!(window_n >= 1, "window_n must be ≥ 1");
        let mut f_window = VecDeque::with_capacity(window_n + 2);
        f_window.push_back(f0);
        Self {
            strategy,
            window_n,
            k: 0,
            f_window,
            eta_window: VecDeque::with_capacity(window_n + 2),
            tbar: f0,
            xi: 0.0,
            zh_c: f0,
            zh_q: 1.0,
            mo_d: f0,
            amini_r: f0,
            flk: f0,
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn window_n(&self) -> usize {
        self.window_n
    }

    /// Most recent accepted value `f_k`.
    pub fn f_current(&self) -> f64 {
        *self.f_window.back().expect("window never empty")
    }

    pub fn flk(&self) -> f64 {
        self.flk
    }

    pub fn tbar(&self) -> f64 {
        self.tbar
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// `(C_k, Q_k)` of the Zhang–Hager average.
    pub fn zhang_hager(&self) -> (f64, f64) {
        (self.zh_c, self.zh_q)
    }

    pub fn mo_d(&self) -> f64 {
        self.mo_d
    }

    pub fn amini_r(&self) -> f64 {
        self.amini_r
    }

    pub fn f_window(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.f_window.iter().copied()
    }

    pub fn eta_window(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.eta_window.iter().copied()
    }

    /// `f_{l(k)}` recomputed from the raw window.
    pub fn flk_from_window(&self) -> f64 {
        self.f_window.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `T̄_k` recomputed with [`tbar_direct`] from the stored windows.
    pub fn tbar_from_window(&self) -> f64 {
        let f: Vec<f64> = self.f_window.iter().copied().collect();
        let skip = self.eta_window.len() + 1 - f.len();
        let eta: Vec<f64> = self.eta_window.iter().copied().skip(skip).collect();
        tbar_direct(&f, &eta).expect("windows stay aligned")
    }

    /// The reference value `T_k` for the configured strategy.
    pub fn reference_value(&self) -> f64 {
        let fk = self.f_current();
        let warm = self.k < self.window_n;
        match self.strategy {
            Strategy::Monotone => fk,
            Strategy::Grippo => self.flk,
            Strategy::ZhangHager => self.zh_c,
            Strategy::Mo => self.mo_d,
            Strategy::Amini => self.amini_r,
            // During warm-up f_k + η_{k-1}(T̄_{k-1} - f_k) collapses to T̄_k.
            Strategy::Term1 if warm => self.tbar,
            Strategy::Term2 if warm => self.flk,
            Strategy::Term1 | Strategy::Term2 => self.tbar.max(fk),
        }
    }

    /// Advances the state by one accepted step with value `f_next` and weight
    /// `eta` (the schedule's `η_k`).
    pub fn update(&mut self, f_next: f64, eta: f64) -> Result<(), NonmonotoneError> {
        if !(0.0..1.0).contains(&eta) {
            return Err(NonmonotoneError::EtaOutOfRange(eta));
        }
        if !f_next.is_finite() {
            return Err(NonmonotoneError::NonFiniteValue(f_next));
        }
        let cap = self.window_n + 1;

        self.f_window.push_back(f_next);
        let evicted = if self.f_window.len() > cap {
            self.f_window.pop_front()
        } else {
            None
        };
        self.eta_window.push_back(eta);
        if self.eta_window.len() > cap {
            self.eta_window.pop_front();
        }
        self.k += 1;

        self.xi = self.eta_window.iter().product();
        self.tbar = match evicted {
            Some(f_out_prev) => {
                let f_out = self.f_window[0];
                tbar_recursive_step(self.tbar, f_next, eta, self.xi, f_out, f_out_prev)
            }
            None => tbar_recursive_step(self.tbar, f_next, eta, 0.0, 0.0, 0.0),
        };

        self.flk = self.flk_from_window();

        let q_next = eta * self.zh_q + 1.0;
        self.zh_c = (eta * self.zh_q * self.zh_c + f_next) / q_next;
        self.zh_q = q_next;

        self.mo_d = eta * self.mo_d + (1.0 - eta) * f_next;
        self.amini_r = eta * self.flk + (1.0 - eta) * f_next;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::config::Strategy;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn init_reference_is_f0_for_every_strategy() {
        for s in Strategy::ALL {
            let st = NonmonotoneState::new(s, 10.0, 10);
            assert_eq!(st.reference_value(), 10.0, "{s:?}");
        }
        let zh = NonmonotoneState::new(Strategy::ZhangHager, 10.0, 10);
        assert_eq!(zh.zhang_hager(), (10.0, 1.0));
        assert_eq!(NonmonotoneState::new(Strategy::Grippo, 10.0, 10).flk(), 10.0);
    }

    #[test]
    fn monotone_reference_tracks_last_value() {
        let mut st = NonmonotoneState::new(Strategy::Monotone, 7.0, 3);
        st.update(4.0, 0.3).unwrap();
        assert_eq!(st.reference_value(), 4.0);
    }

    #[test]
    fn term2_uses_running_max_while_warming_up() {
        let mut st = NonmonotoneState::new(Strategy::Term2, 10.0, 10);
        st.update(8.0, 0.45).unwrap();
        assert_eq!(st.k(), 1);
        assert_eq!(st.reference_value(), 10.0);
    }

    #[test]
    fn term1_max_guard_once_window_is_full() {
        // N = 2, f = (10, 8, 6) with η = 0.5 gives T̄ = 7.5; then f jumps to 9.
        let mut st = NonmonotoneState::new(Strategy::Term1, 10.0, 2);
        st.update(8.0, 0.5).unwrap();
        st.update(6.0, 0.5).unwrap();
        assert_eq!(st.tbar(), 7.5);
        assert_eq!(st.reference_value(), 7.5);
        let mut guarded = st.clone();
        guarded.tbar = 7.5;
        guarded.f_window.push_back(9.0);
        guarded.f_window.pop_front();
        guarded.k = 3;
        assert_eq!(guarded.reference_value(), 9.0);
    }

    #[test]
    fn zhang_hager_recurrence() {
        let mut st = NonmonotoneState::new(Strategy::ZhangHager, 10.0, 10);
        st.update(8.0, 0.85).unwrap();
        let (c, q) = st.zhang_hager();
        assert!(close(q, 1.85, 1e-15));
        // (0.85·1·10 + 8) / 1.85
        assert!(close(c, 16.5 / 1.85, 1e-15));
        assert!((c - 8.918919).abs() < 1e-6);
    }

    #[test]
    fn mo_recurrence() {
        let mut st = NonmonotoneState::new(Strategy::Mo, 4.0, 10);
        st.update(2.0, 0.5).unwrap();
        assert_eq!(st.mo_d(), 3.0);
        assert_eq!(st.reference_value(), 3.0);
    }

    #[test]
    fn amini_combines_running_max_and_current() {
        let mut st = NonmonotoneState::new(Strategy::Amini, 10.0, 10);
        st.update(6.0, 0.5).unwrap();
        assert_eq!(st.flk(), 10.0);
        assert_eq!(st.amini_r(), 8.0);
    }

    #[test]
    fn update_rejects_bad_eta() {
        let mut st = NonmonotoneState::new(Strategy::Term1, 1.0, 3);
        assert_eq!(st.update(0.5, 1.0), Err(NonmonotoneError::EtaOutOfRange(1.0)));
        assert!(st.update(0.5, -0.1).is_err());
        assert!(st.update(f64::NAN, 0.1).is_err());
        assert_eq!(st.k(), 0);
    }

    #[test]
    fn tbar_direct_examples() {
        assert_eq!(tbar_direct(&[10.0, 8.0, 6.0], &[0.5, 0.5]), Ok(7.5));
        assert_eq!(tbar_direct(&[3.0, 1.0, 2.0, 5.0], &[0.0; 3]), Ok(5.0));
        assert_eq!(tbar_direct(&[4.25], &[]), Ok(4.25));
        assert!(matches!(
            tbar_direct(&[1.0, 2.0], &[0.5, 0.5]),
            Err(NonmonotoneError::WindowMismatch { .. })
        ));
        assert_eq!(tbar_direct(&[], &[]), Err(NonmonotoneError::EmptyWindow));
    }

    #[test]
    fn recursive_step_examples() {
        assert_eq!(tbar_recursive_step(10.0, 8.0, 0.5, 0.0, 0.0, 0.0), 9.0);
        // Equal outgoing values annihilate the correction.
        let plain = tbar_recursive_step(10.0, 8.0, 0.5, 0.0, 0.0, 0.0);
        assert_eq!(tbar_recursive_step(10.0, 8.0, 0.5, 0.3, 4.0, 4.0), plain);
    }

    #[test]
    fn eta_schedule_examples() {
        let eta1 = eta_schedule(0.25, f64::NAN, 1);
        assert_eq!(eta1, 0.125);
        assert_eq!(eta_schedule(eta1, 0.25, 2), 0.1875);
        let (mut prev, mut prev2) = (0.0, 0.0);
        for k in 1..50 {
            let e = eta_schedule(prev, prev2, k);
            assert_eq!(e, 0.0);
            prev2 = prev;
            prev = e;
        }
    }

    #[test]
    fn zero_eta_collapses_every_average_to_fk() {
        for s in [
            Strategy::Monotone,
            Strategy::ZhangHager,
            Strategy::Mo,
            Strategy::Amini,
            Strategy::Term1,
        ] {
            let mut st = NonmonotoneState::new(s, 5.0, 3);
            for f in [4.0, 3.5, 3.0, 2.0, 1.5, 1.0] {
                st.update(f, 0.0).unwrap();
                assert_eq!(st.reference_value(), f, "{s:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn weights_are_convex(eta in prop::collection::vec(0.0f64..1.0, 0..12)) {
            let w = convex_weights(&eta);
            prop_assert_eq!(w.len(), eta.len() + 1);
            prop_assert!(w.iter().all(|&c| c >= 0.0));
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        }

        #[test]
        fn state_matches_direct_evaluation(
            n in 1usize..8,
            steps in prop::collection::vec((-10.0f64..10.0, 0.0f64..1.0), 1..40),
        ) {
            let mut st = NonmonotoneState::new(Strategy::Term1, 3.0, n);
            let mut eta_hist = Vec::new();
            for (f, eta) in steps {
                st.update(f, eta).unwrap();
                eta_hist.push(eta);
                prop_assert!(st.f_window().len() <= n + 1);
                let tail = &eta_hist[eta_hist.len().saturating_sub(n + 1)..];
                let prod: f64 = tail.iter().product();
                prop_assert!((st.xi() - prod).abs() <= 1e-14 * prod.abs().max(f64::MIN_POSITIVE));
                prop_assert!(close(st.tbar(), st.tbar_from_window(), 1e-12));
                prop_assert_eq!(st.flk(), st.flk_from_window());
                prop_assert!(st.zhang_hager().1 >= 1.0);
            }
        }
    }
}
