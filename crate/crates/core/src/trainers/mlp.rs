//! Fully connected discriminator: leaky-ReLU(0.2) hidden layers and a logistic
//! output, trained on mean binary cross-entropy.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

const LEAK: f64 = 0.2;
const INPUT_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq)]
struct Layer {
    inputs: usize,
    outputs: usize,
    /// Row-major `outputs × inputs`.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Layer {
    fn affine(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.weights
                .chunks_exact(self.inputs)
                .zip(&self.biases)
                .map(|(row, b)| b + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()),
        );
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpDiscriminator {
    layers: Vec<Layer>,
}

fn leaky(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        LEAK * z
    }
}

fn leaky_slope(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else {
        LEAK
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// ln(1 + eᶻ) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

impl MlpDiscriminator {
    fn shape(hidden: &[usize]) -> Vec<(usize, usize)> {
        let mut widths = vec![INPUT_DIM];
        widths.extend_from_slice(hidden);
        widths.push(1);
        widths.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// All weights and biases zero; outputs 0.5 everywhere.
    pub fn zeros(hidden: &[usize]) -> Self {
        let layers = Self::shape(hidden)
            .into_iter()
            .map(|(inputs, outputs)| Layer {
                inputs,
                outputs,
                weights: vec![0.0; inputs * outputs],
                biases: vec![0.0; outputs],
            })
            .collect();
        Self { layers }
    }

    /// He-normal weights (std √(2 / fan_in)), zero biases.
    pub fn random<R: Rng + ?Sized>(hidden: &[usize], rng: &mut R) -> Self {
        let mut mlp = Self::zeros(hidden);
        for layer in mlp.layers.iter_mut() {
            let std = libm::sqrt(2.0 / layer.inputs as f64);
            for w in layer.weights.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *w = std * z;
            }
        }
        mlp
    }

    pub fn n_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    /// Flattened as, per layer, weights (row-major) then biases.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return Err(Error::LengthMismatch {
                left: params.len(),
                right: self.n_params(),
            });
        }
        let mut rest = params;
        for l in self.layers.iter_mut() {
            let (w, tail) = rest.split_at(l.weights.len());
            let (b, tail) = tail.split_at(l.biases.len());
            l.weights.copy_from_slice(w);
            l.biases.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    /// Pre-activation of the output unit.
    fn logit(&self, x: [f64; 2]) -> f64 {
        let mut a = x.to_vec();
        let mut z = Vec::new();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            layer.affine(&a, &mut z);
            if k == last {
                return z[0];
            }
            a.clear();
            a.extend(z.iter().map(|&v| leaky(v)));
        }
        unreachable!("at least one layer")
    }

    /// D(x) ∈ (0, 1).
    pub fn forward(&self, x: [f64; 2]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// −ln D(x), evaluated from the logit.
    pub fn neg_log_output(&self, x: [f64; 2]) -> f64 {
        softplus(-self.logit(x))
    }

    /// ln(1 − D(x)), evaluated from the logit.
    pub fn log_one_minus_output(&self, x: [f64; 2]) -> f64 {
        -softplus(self.logit(x))
    }

    /// Mean binary cross-entropy over `batch` and its exact gradient with
    /// respect to [`MlpDiscriminator::params`].
    pub fn loss_and_grad(&self, batch: &[[f64; 2]], labels: &[f64]) -> Result<(f64, Vec<f64>)> {
        if batch.len() != labels.len() || batch.is_empty() {
            return Err(Error::LengthMismatch {
                left: batch.len(),
                right: labels.len(),
            });
        }
        let n = batch.len() as f64;
        let mut grad_layers: Vec<(Vec<f64>, Vec<f64>)> = self
            .layers
            .iter()
            .map(|l| (vec![0.0; l.weights.len()], vec![0.0; l.biases.len()]))
            .collect();
        let mut loss = 0.0;
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len() + 1);
        let mut pre: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());

        for (x, &y) in batch.iter().zip(labels) {
            activations.clear();
            pre.clear();
            activations.push(x.to_vec());
            for (k, layer) in self.layers.iter().enumerate() {
                let mut z = Vec::new();
                layer.affine(&activations[k], &mut z);
                let a = if k + 1 == self.layers.len() {
                    z.clone()
                } else {
                    z.iter().map(|&v| leaky(v)).collect()
                };
                pre.push(z);
                activations.push(a);
            }
            let logit = pre.last().expect("output layer")[0];
            // −[y ln σ(z) + (1−y) ln(1−σ(z))] = y·softplus(−z) + (1−y)·softplus(z)
            loss += y * softplus(-logit) + (1.0 - y) * softplus(logit);

            let mut delta = vec![(sigmoid(logit) - y) / n];
            for k in (0..self.layers.len()).rev() {
                let layer = &self.layers[k];
                let (gw, gb) = &mut grad_layers[k];
                let input = &activations[k];
                for (o, d) in delta.iter().enumerate() {
                    gb[o] += d;
                    for (i, a) in input.iter().enumerate() {
                        gw[o * layer.inputs + i] += d * a;
                    }
                }
                if k == 0 {
                    break;
                }
                let prev_pre = &pre[k - 1];
                let mut next = vec![0.0; layer.inputs];
                for (o, d) in delta.iter().enumerate() {
                    let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (acc, w) in next.iter_mut().zip(row) {
                        *acc += d * w;
                    }
                }
                for (acc, z) in next.iter_mut().zip(prev_pre) {
                    *acc *= leaky_slope(*z);
                }
                delta = next;
            }
        }
        let loss = loss / n;
        if !loss.is_finite() {
            return Err(Error::NonFinite("discriminator loss"));
        }
        let mut grad = Vec::with_capacity(self.n_params());
        for (gw, gb) in grad_layers {
            grad.extend(gw);
            grad.extend(gb);
        }
        Ok((loss, grad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn zero_weights_output_half() {
        let d = MlpDiscriminator::zeros(&[32, 16]);
        for x in [[0.0, 0.0], [0.3, 0.9], [-4.0, 10.0]] {
            assert_eq!(d.forward(x), 0.5);
        }
        assert_eq!(d.n_params(), 2 * 32 + 32 + 32 * 16 + 16 + 16 + 1);
    }

    #[test]
    fn backprop_matches_finite_differences() {
        let mut rng = rng_from_seed(21);
        let mut d = MlpDiscriminator::random(&[32, 16], &mut rng);
        let batch: Vec<[f64; 2]> = (0..8).map(|_| [rng.random(), rng.random()]).collect();
        let labels: Vec<f64> = (0..8).map(|i| (i % 2) as f64).collect();
        let (_, grad) = d.loss_and_grad(&batch, &labels).unwrap();
        let base = d.params();
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for i in 0..base.len() {
            let mut p = base.clone();
            p[i] += h;
            d.set_params(&p).unwrap();
            let up = d.loss_and_grad(&batch, &labels).unwrap().0;
            p[i] -= 2.0 * h;
            d.set_params(&p).unwrap();
            let down = d.loss_and_grad(&batch, &labels).unwrap().0;
            let fd = (up - down) / (2.0 * h);
            let scale = grad[i].abs().max(fd.abs());
            if scale > 1e-7 {
                worst = worst.max((grad[i] - fd).abs() / scale);
            }
        }
        d.set_params(&base).unwrap();
        assert!(worst < 1e-4, "max relative error {worst}");
    }

    #[test]
    fn neg_log_output_is_stable() {
        let mut d = MlpDiscriminator::zeros(&[4]);
        let mut p = d.params();
        let last = p.len() - 1;
        p[last] = -800.0;
        d.set_params(&p).unwrap();
        assert!((d.neg_log_output([0.1, 0.2]) - 800.0).abs() < 1e-9);
    }

    use rand::Rng;
}
