//! Factored categorical distribution over concatenated head logits.

use rand::Rng;

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logits.iter().map(|&l| (l - max).exp()).sum::<f64>().ln();
    logits.iter().map(|&l| l - lse).collect()
}

pub fn entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

/// Iterates over the logit slice of each head.
pub fn split_heads<'a>(
    logits: &'a [f64],
    head_sizes: &'a [usize],
) -> impl Iterator<Item = &'a [f64]> + 'a {
    head_sizes.iter().scan(0usize, move |offset, &n| {
        let s = &logits[*offset..*offset + n];
        *offset += n;
        Some(s)
    })
}

/// Draws one index from `probs` by inverse CDF.
pub fn sample_categorical<R: Rng>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap at the top of the CDF
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// Result of sampling every head.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledAction {
    pub heads: Vec<usize>,
    pub head_log_probs: Vec<f64>,
    /// Sum of the head log-probabilities.
    pub log_prob: f64,
}

pub fn sample_action<R: Rng>(logits: &[f64], head_sizes: &[usize], rng: &mut R) -> SampledAction {
    let mut heads = Vec::with_capacity(head_sizes.len());
    let mut head_log_probs = Vec::with_capacity(head_sizes.len());
    for l in split_heads(logits, head_sizes) {
        let idx = sample_categorical(&softmax(l), rng);
        heads.push(idx);
        head_log_probs.push(log_softmax(l)[idx]);
    }
    let log_prob = head_log_probs.iter().sum();
    SampledAction { heads, head_log_probs, log_prob }
}

/// Most likely index of every head.
pub fn mode_action(logits: &[f64], head_sizes: &[usize]) -> Vec<usize> {
    split_heads(logits, head_sizes)
        .map(|l| {
            l.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
                .0
        })
        .collect()
}

/// Joint log-probability of `heads` under the factored distribution.
pub fn log_prob(logits: &[f64], head_sizes: &[usize], heads: &[usize]) -> f64 {
    split_heads(logits, head_sizes).zip(heads).map(|(l, &a)| log_softmax(l)[a]).sum()
}

/// Sum of head entropies.
pub fn total_entropy(logits: &[f64], head_sizes: &[usize]) -> f64 {
    split_heads(logits, head_sizes).map(|l| entropy(&softmax(l))).sum()
}
