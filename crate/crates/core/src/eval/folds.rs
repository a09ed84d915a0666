//! Seeded fold assignment.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::EvalError;

/// Fold index of every graph. For class labels each class is shuffled and
/// dealt round-robin, so per-fold class counts differ by at most one and
/// fold sizes by at most one. Real-valued responses get a plain shuffled
/// split.
pub fn stratified_kfold(data: &Dataset, folds: usize, seed: u64) -> Result<Vec<usize>, EvalError> {
    kfold_assign(&data.responses, data.is_binary(), folds, seed)
}

pub(crate) fn kfold_assign(
    responses: &[f64],
    stratify: bool,
    folds: usize,
    seed: u64,
) -> Result<Vec<usize>, EvalError> {
    if folds < 2 {
        return Err(EvalError::TooFewFolds(folds));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<f64> = if stratify { responses.to_vec() } else { vec![0.0] };
    classes.sort_by(f64::total_cmp);
    classes.dedup();

    let mut assign = vec![usize::MAX; responses.len()];
    let mut position = 0;
    for &class in &classes {
        let mut members: Vec<usize> = (0..responses.len()).filter(|&i| !stratify || responses[i] == class).collect();
        if members.len() < folds {
            return Err(EvalError::ClassTooSmall { label: class, count: members.len(), folds });
        }
        members.shuffle(&mut rng);
        for i in members {
            assign[i] = position % folds;
            position += 1;
        }
    }
    Ok(assign)
}

/// `(train, test)` index lists for fold `f`, both ascending.
pub fn split_indices(assign: &[usize], f: usize) -> (Vec<usize>, Vec<usize>) {
    (0..assign.len()).partition(|&i| assign[i] != f)
}
