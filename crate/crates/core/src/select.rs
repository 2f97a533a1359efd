//! Deterministic argmax/argmin over index-ordered scores.
//!
//! Two scores tie when they agree within `TIE_RTOL` relative; the lowest
//! index wins a tie.

pub(crate) const TIE_RTOL: f64 = 1e-14;

/// Index of the largest finite score, skipping `None`.
pub(crate) fn argmax(scores: impl IntoIterator<Item = Option<f64>>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.into_iter().enumerate() {
        let Some(s) = s else { continue };
        if s.is_nan() {
            continue;
        }
        match best {
            None => best = Some((i, s)),
            Some((_, b)) if s > b && (s - b) > TIE_RTOL * b.abs() => best = Some((i, s)),
            _ => {}
        }
    }
    best
}

/// Index of the smallest finite score, skipping `None` and infinities.
pub(crate) fn argmin(scores: impl IntoIterator<Item = Option<f64>>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.into_iter().enumerate() {
        let Some(s) = s else { continue };
        if !s.is_finite() {
            continue;
        }
        match best {
            None => best = Some((i, s)),
            Some((_, b)) if s < b && (b - s) > TIE_RTOL * b.abs() => best = Some((i, s)),
            _ => {}
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_index_wins_ties() {
        let v = [Some(1.0), Some(3.0), Some(3.0 * (1.0 + 1e-15)), Some(2.0)];
        assert_eq!(argmax(v).unwrap().0, 1);
        let v = [Some(5.0), Some(2.0), Some(2.0 * (1.0 - 1e-15)), None];
        assert_eq!(argmin(v).unwrap().0, 1);
    }

    #[test]
    fn clear_winner_beats_earlier_index() {
        let v = [Some(1.0), Some(1.0 + 1e-10)];
        assert_eq!(argmax(v).unwrap().0, 1);
        let v = [Some(1.0), Some(1.0 - 1e-10)];
        assert_eq!(argmin(v).unwrap().0, 1);
    }

    #[test]
    fn skips_missing_and_infinite() {
        assert_eq!(argmin([None, Some(f64::INFINITY)]), None);
        assert_eq!(argmin([Some(f64::INFINITY), Some(4.0)]), Some((1, 4.0)));
        assert_eq!(argmax([None, Some(f64::NAN), Some(0.0)]), Some((2, 0.0)));
        assert_eq!(argmax(std::iter::empty()), None);
    }
}
