//! Classification metrics over `{-1, +1}` labels.

/// Fraction of positions where `predictions` equals `labels`.
pub fn accuracy(labels: &[f64], predictions: &[f64]) -> f64 {
    assert_eq!(labels.len(), predictions.len(), "label/prediction length mismatch");
    if labels.is_empty() {
        return 0.0;
    }
    let hits = labels.iter().zip(predictions).filter(|(y, p)| y == p).count();
    hits as f64 / labels.len() as f64
}

/// Area under the ROC curve as the Mann-Whitney rank statistic, tied
/// scores sharing their average rank. `None` unless both classes occur.
pub fn auc(labels: &[f64], scores: &[f64]) -> Option<f64> {
    assert_eq!(labels.len(), scores.len(), "label/score length mismatch");
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        rank_sum_pos += avg * order[i..=j].iter().filter(|&&k| labels[k] > 0.0).count() as f64;
        i = j + 1;
    }
    let pos = labels.iter().filter(|&&y| y > 0.0).count() as f64;
    let neg = labels.len() as f64 - pos;
    if pos == 0.0 || neg == 0.0 {
        return None;
    }
    Some((rank_sum_pos - pos * (pos + 1.0) / 2.0) / (pos * neg))
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auc_conventions() {
        let y = [-1.0, -1.0, 1.0, 1.0];
        assert_eq!(auc(&y, &[0.1, 0.2, 0.3, 0.4]), Some(1.0));
        assert_eq!(auc(&y, &[0.4, 0.3, 0.2, 0.1]), Some(0.0));
        assert_eq!(auc(&y, &[0.5; 4]), Some(0.5));
        assert_eq!(auc(&[1.0, 1.0], &[0.1, 0.2]), None);
        // one tie across classes counts half
        assert_eq!(auc(&y, &[0.1, 0.3, 0.3, 0.4]), Some(0.875));
    }

    #[test]
    fn accuracy_and_spread() {
        assert_eq!(accuracy(&[1.0, -1.0, 1.0, 1.0], &[1.0, 1.0, 1.0, -1.0]), 0.5);
        let (m, s) = mean_sd(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }
}
