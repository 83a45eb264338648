use super::{GenId, SSet, SSetBuilder, Simplex};
use crate::error::{Error, Result};

/// The quotient `X/A`, with `A` (given by generator membership) collapsed to
/// the basepoint. `A` must contain the basepoint and be closed under faces.
///
/// Nondegenerate simplices of `X/A` are the basepoint plus the generators
/// outside `A`; faces landing in `A` become degeneracies of the basepoint.
pub fn collapse(x: &SSet, in_a: &[bool]) -> Result<SSet> {
    if in_a.len() != x.num_generators() {
        return Err(Error::InvalidInput("membership vector has the wrong length".into()));
    }
    if !in_a[x.basepoint() as usize] {
        return Err(Error::InvalidInput(
            "collapsed subcomplex must contain the basepoint".into(),
        ));
    }
    for g in 0..x.num_generators() as GenId {
        if in_a[g as usize] && x.gen_faces(g).iter().any(|f| !in_a[f.gen as usize]) {
            return Err(Error::InvalidInput(format!(
                "collapsed set is not a subcomplex: generator {g} has a face outside it"
            )));
        }
    }

    let mut new_id: Vec<Option<GenId>> = vec![None; x.num_generators()];
    let mut next: GenId = 1;
    for g in 0..x.num_generators() as GenId {
        if !in_a[g as usize] {
            new_id[g as usize] = Some(next);
            next += 1;
        }
    }

    let mut b = SSetBuilder::new(format!("{}/A", x.name()));
    let base = b.add(0, Vec::new());
    for g in 0..x.num_generators() as GenId {
        if in_a[g as usize] {
            continue;
        }
        let faces = x
            .gen_faces(g)
            .iter()
            .map(|f| match new_id[f.gen as usize] {
                Some(id) => Simplex { gen: id, ..*f },
                None => Simplex::vertex_at(base, f.level()),
            })
            .collect();
        b.add(x.gen_dim(g), faces);
    }
    Ok(b.finish(base, x.truncated_at))
}
