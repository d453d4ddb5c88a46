use super::types::{AlphaBlocks, GMMLRep, GMMLUnivariateRep};
use crate::error::{domain, model, Error, Result};
use crate::linalg::{solve_vec, SquareMatrix};
use crate::phasetype::{censor, partition_rates, PhaseTypeRep, SubIntensityMatrix};
use nalgebra::DVector;

/// `π (Δ(R u^α) - T)^{-1} t` with `u^α = (u_1^{α_1}, …, u_n^{α_n})`.
pub fn gmml_joint_laplace(rep: &GMMLRep, u: &[f64]) -> Result<f64> {
    if u.len() != rep.coordinates() {
        return domain(format!("expected {} Laplace arguments, got {}", rep.coordinates(), u.len()));
    }
    if u.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return domain("Laplace arguments must be >= 0");
    }
    let ua = DVector::from_iterator(u.len(), u.iter().zip(&rep.alphas).map(|(x, a)| x.powf(*a)));
    let ru = rep.base.r.matrix() * ua;
    let a = SquareMatrix::from_diagonal(&ru) - rep.base.t.matrix();
    Ok(rep.base.pi.dot(&solve_vec(&a, rep.base.t.exit())?))
}

/// Law of `<w, X>`: an atom at zero plus a possibly defective GMML part.
#[derive(Debug, Clone, PartialEq)]
pub struct GMMLProjection {
    pub atom: f64,
    pub law: GMMLUnivariateRep,
    /// Original state index of each retained state, in the order of `law`.
    pub retained: Vec<usize>,
}

/// Projection onto the direction `w`.
///
/// Every retained state takes the index shared by the coordinates it earns
/// reward in (counting only coordinates with `w_k > 0`); a state earning in
/// coordinates with different indices is rejected. States are then grouped
/// into blocks by increasing index.
pub fn gmml_project(rep: &GMMLRep, w: &[f64]) -> Result<GMMLProjection> {
    let n = rep.coordinates();
    if w.len() != n {
        return domain(format!("expected {n} weights, got {}", w.len()));
    }
    if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || w.iter().all(|&x| x == 0.0) {
        return domain("weights must be nonnegative and not all zero");
    }
    let r = rep.base.r.matrix();
    let wa = DVector::from_iterator(n, w.iter().zip(&rep.alphas).map(|(x, a)| x.powf(*a)));
    let rw = r * &wa;
    let (plus, zero) = partition_rates(&rw);
    if plus.is_empty() {
        return Err(Error::Degenerate("every state earns zero reward".into()));
    }

    let mut state_alpha = Vec::with_capacity(plus.len());
    for &i in &plus {
        let mut found: Option<f64> = None;
        for k in 0..n {
            if r[(i, k)] > 0.0 && w[k] > 0.0 {
                match found {
                    None => found = Some(rep.alphas[k]),
                    Some(a) if a != rep.alphas[k] => {
                        return model(format!(
                            "state {i} earns reward in coordinates with different indices ({a} and {})",
                            rep.alphas[k]
                        ))
                    }
                    _ => {}
                }
            }
        }
        state_alpha.push(found.expect("retained states earn reward"));
    }

    let (atom, pi_w, t) = censor(&rep.base.pi, rep.base.t.matrix(), rep.base.t.exit(), &plus, &zero)?;

    // stable sort of retained states by index
    let mut order: Vec<usize> = (0..plus.len()).collect();
    order.sort_by(|&a, &b| state_alpha[a].total_cmp(&state_alpha[b]));
    let m = plus.len();
    let pi = DVector::from_iterator(m, order.iter().map(|&k| pi_w[k]));
    let tw = SquareMatrix::from_fn(m, m, |i, j| t[(order[i], order[j])] / rw[plus[order[i]]]);

    let mut alphas: Vec<f64> = vec![];
    let mut dims: Vec<usize> = vec![];
    for &k in &order {
        let a = state_alpha[k];
        if alphas.last() == Some(&a) {
            *dims.last_mut().unwrap() += 1;
        } else {
            alphas.push(a);
            dims.push(1);
        }
    }
    let law = GMMLUnivariateRep::new(
        AlphaBlocks::new(alphas, dims)?,
        PhaseTypeRep::new(pi, SubIntensityMatrix::new(tw)?)?,
    )?;
    Ok(GMMLProjection {
        atom,
        law,
        retained: order.iter().map(|&k| plus[k]).collect(),
    })
}
