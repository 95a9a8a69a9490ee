use rand::Rng;

use crate::noise::{confusion_matrix_pmf, NoiseModel};
use crate::sim::{dm_simulate, sample_trajectories, simulate, Circuit, Pmf, ShotHistogram};
use crate::{Error, Result};

/// Simulation backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Exact statevector; readout error via the confusion matrix only.
    Statevector,
    /// Exact density matrix with every channel; readout via confusion matrix.
    DensityMatrix,
    /// Sampled Kraus trajectories with classical readout flips.
    Trajectory,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Statevector => "statevector",
            Backend::DensityMatrix => "density_matrix",
            Backend::Trajectory => "trajectory",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "statevector" => Some(Backend::Statevector),
            "density_matrix" => Some(Backend::DensityMatrix),
            "trajectory" => Some(Backend::Trajectory),
            _ => None,
        }
    }
}

/// A backend paired with the noise it simulates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Device {
    pub backend: Backend,
    pub noise: NoiseModel,
}

impl Device {
    pub fn ideal() -> Self {
        Self {
            backend: Backend::Statevector,
            noise: NoiseModel::ideal(),
        }
    }

    pub fn new(backend: Backend, noise: NoiseModel) -> Result<Self> {
        let device = Self { backend, noise };
        device.validate()?;
        Ok(device)
    }

    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        if self.backend == Backend::Statevector {
            for (name, value) in self.noise.fields().into_iter().skip(2) {
                if value > 0.0 {
                    return Err(Error::IncompatibleBackend {
                        backend: self.backend.name(),
                        channel: name,
                    });
                }
            }
        }
        Ok(())
    }

    /// The exact output distribution including readout error, when the
    /// backend can compute it. Trajectories return `None`.
    pub fn exact_pmf(&self, circuit: &Circuit, params: &[f64]) -> Result<Option<Pmf>> {
        let pre_readout = match self.backend {
            Backend::Statevector => simulate(circuit, params)?.exact_pmf(),
            Backend::DensityMatrix => dm_simulate(circuit, params, &self.noise)?.diagonal(),
            Backend::Trajectory => return Ok(None),
        };
        Ok(Some(self.apply_readout(&pre_readout)?))
    }

    /// The distribution used to report `kl_exact`: the device's exact output
    /// where available, otherwise the noise-free Born distribution.
    pub fn reporting_pmf(&self, circuit: &Circuit, params: &[f64]) -> Result<Pmf> {
        match self.exact_pmf(circuit, params)? {
            Some(p) => Ok(p),
            None => Ok(simulate(circuit, params)?.exact_pmf()),
        }
    }

    pub fn apply_readout(&self, pmf: &Pmf) -> Result<Pmf> {
        confusion_matrix_pmf(pmf, self.noise.p01, self.noise.p10)
    }

    /// Measures `n_shots` circuit executions.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        circuit: &Circuit,
        params: &[f64],
        n_shots: u64,
        rng: &mut R,
    ) -> Result<ShotHistogram> {
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        match self.backend {
            Backend::Trajectory => sample_trajectories(circuit, params, &self.noise, n_shots, rng),
            _ => {
                let pmf = self.exact_pmf(circuit, params)?.expect("exact backend");
                pmf.sample_shots(n_shots, rng)
            }
        }
    }
}

/// Samples a trained model.
pub fn run_inference<R: Rng + ?Sized>(
    circuit: &Circuit,
    params: &[f64],
    n_shots: u64,
    device: &Device,
    rng: &mut R,
) -> Result<ShotHistogram> {
    circuit.check_params(params)?;
    device.validate()?;
    device.sample(circuit, params, n_shots, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sim::GateOp;

    #[test]
    fn statevector_rejects_state_channels() {
        let err = Device::new(Backend::Statevector, NoiseModel::depolarizing_2q(0.1)).unwrap_err();
        assert_eq!(
            err,
            Error::IncompatibleBackend {
                backend: "statevector",
                channel: "p_depol_2q"
            }
        );
        assert!(Device::new(Backend::Statevector, NoiseModel::readout(0.1)).is_ok());
        assert!(Device::new(Backend::DensityMatrix, NoiseModel::depolarizing_2q(0.1)).is_ok());
    }

    #[test]
    fn inference_contract() {
        let c = Circuit::from_gates(2, [GateOp::h(0), GateOp::rx(1, 0)]).unwrap();
        let d = Device::ideal();
        assert!(matches!(
            run_inference(&c, &[], 10, &d, &mut rng_from_seed(0)),
            Err(Error::ParamLength { .. })
        ));
        assert_eq!(
            run_inference(&c, &[0.3], 0, &d, &mut rng_from_seed(0)),
            Err(Error::ZeroShots)
        );
        let a = run_inference(&c, &[0.3], 500, &d, &mut rng_from_seed(4)).unwrap();
        let b = run_inference(&c, &[0.3], 500, &d, &mut rng_from_seed(4)).unwrap();
        assert_eq!(a, b);
    }
}
