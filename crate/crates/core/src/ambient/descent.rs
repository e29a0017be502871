//! Effectivity of arrows and descent along effective covers.

use super::enumerate::{all_tables, ambient_of, homs, probe_objects};
use super::{Arr, Obj, Structure};
use crate::error::{Error, Result};

/// Size of the probe objects used by [`is_effective`].
pub const PROBE_BOUND: usize = 4;

/// Whether `f` is the coequaliser of its kernel pair, tested against the
/// probe objects of size at most 4 together with `cod(f)`.
pub fn is_effective(f: &Arr) -> bool {
    let mut probes = probe_objects(&ambient_of(f.cod()), PROBE_BOUND);
    if !probes.contains(f.cod()) {
        probes.push(f.cod().clone());
    }
    is_effective_with(f, &probes)
}

/// Effectivity against an explicit list of probe objects: every cocone
/// `h: A → Y` over the kernel pair factors through `f` exactly once.
pub fn is_effective_with(f: &Arr, probes: &[Obj]) -> bool {
    let a = f.dom();
    let b = f.cod();
    // Kernel classes of f, labelled by the image point they sit over.
    let image: Vec<usize> = {
        let mut im: Vec<usize> = f.table().to_vec();
        im.sort_unstable();
        im.dedup();
        im
    };
    for y in probes {
        let Ok(factor_maps) = homs(b, y) else { return false };
        let mut composites: Vec<Vec<usize>> =
            factor_maps.iter().map(|g| f.table().iter().map(|&x| g.at(x)).collect()).collect();
        composites.sort();
        // Uniqueness: distinct g give distinct g∘f.
        if composites.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        // Existence: every cocone is some g∘f.
        let cocones: Vec<Vec<usize>> = match a.structure() {
            Structure::Set => {
                let Ok(class_maps) = all_tables(image.len(), y.size()) else { return false };
                class_maps
                    .into_iter()
                    .map(|c| {
                        f.table()
                            .iter()
                            .map(|v| c[image.binary_search(v).expect("in image")])
                            .collect()
                    })
                    .collect()
            }
            _ => {
                let Ok(hs) = homs(a, y) else { return false };
                hs.into_iter()
                    .filter(|h| constant_on_fibers(f, h).is_ok())
                    .map(|h| h.table().to_vec())
                    .collect()
            }
        };
        if cocones.iter().any(|h| composites.binary_search(h).is_err()) {
            return false;
        }
    }
    true
}

fn constant_on_fibers(q: &Arr, h: &Arr) -> Result<Vec<Option<usize>>> {
    let mut first: Vec<Option<usize>> = vec![None; q.cod().size()];
    for x in q.dom().elements() {
        let b = q.at(x);
        match first[b] {
            None => first[b] = Some(x),
            Some(x0) if h.at(x0) != h.at(x) => {
                return Err(Error::CocycleViolation {
                    first: x0,
                    second: x,
                    first_value: h.at(x0),
                    second_value: h.at(x),
                })
            }
            Some(_) => {}
        }
    }
    Ok(first)
}

/// The unique `g: B → Y` with `g ∘ q = h`, for a surjective cover `q: E → B`.
///
/// Each point of `B` takes the value of `h` on its first preimage; the
/// result is then checked against every element of `E`.
pub fn descend(q: &Arr, h: &Arr) -> Result<Arr> {
    if q.dom() != h.dom() {
        return Err(Error::DomainMismatch("cover and descended arrow have different domains".into()));
    }
    if !q.is_surjective() {
        return Err(Error::NotEffective("cover is not surjective".into()));
    }
    let first = constant_on_fibers(q, h)?;
    let table: Vec<usize> = first.iter().map(|x| h.at(x.expect("surjective"))).collect();
    let g = Arr::new(q.cod().clone(), h.cod().clone(), table)?;
    debug_assert_eq!(super::comp(&g, q), *h);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ambient::compose;
    use crate::instances::FiniteGroup;

    fn map(dom: usize, cod: usize, t: &[usize]) -> Arr {
        Arr::new(Obj::set(dom), Obj::set(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn descent_examples() {
        let q = map(3, 2, &[0, 0, 1]);
        let h = map(3, 8, &[5, 5, 7]);
        assert_eq!(descend(&q, &h).unwrap().table(), &[5, 7]);
        let id = Arr::identity(&Obj::set(3));
        assert_eq!(descend(&id, &h).unwrap(), h);
        let bad = map(3, 8, &[5, 6, 7]);
        assert_eq!(
            descend(&q, &bad),
            Err(Error::CocycleViolation { first: 0, second: 1, first_value: 5, second_value: 6 })
        );
        assert!(matches!(descend(&map(1, 2, &[0]), &map(1, 2, &[0])), Err(Error::NotEffective(_))));
    }

    #[test]
    fn descended_arrow_is_the_unique_solution() {
        for (n, m) in [(3, 2), (4, 2), (4, 3), (5, 3)] {
            for q in homs(&Obj::set(n), &Obj::set(m)).unwrap().into_iter().filter(Arr::is_surjective) {
                for y in 1..=3 {
                    let yo = Obj::set(y);
                    let candidates = homs(&Obj::set(m), &yo).unwrap();
                    for h in homs(&Obj::set(n), &yo).unwrap() {
                        let solutions: Vec<_> =
                            candidates.iter().filter(|g| compose(g, &q).unwrap() == h).collect();
                        match descend(&q, &h) {
                            Ok(g) => assert_eq!(solutions, vec![&g]),
                            Err(_) => assert!(solutions.is_empty()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn effective_means_surjective_in_finset() {
        assert!(is_effective(&map(3, 2, &[0, 0, 1])));
        assert!(!is_effective(&map(1, 2, &[0])));
        assert!(is_effective(&Arr::identity(&Obj::set(3))));
        assert!(is_effective(&Arr::identity(&Obj::set(0))));
        for n in 0..=4 {
            for m in 0..=3 {
                for f in homs(&Obj::set(n), &Obj::set(m)).unwrap() {
                    assert_eq!(is_effective(&f), f.is_surjective(), "{:?}", f.table());
                }
            }
        }
    }

    #[test]
    fn effective_means_surjective_in_fingrp() {
        let groups: Vec<Obj> = FiniteGroup::catalogue(4).into_iter().map(|(_, g)| Obj::group(g)).collect();
        for a in &groups {
            for b in &groups {
                for f in homs(a, b).unwrap() {
                    assert_eq!(is_effective(&f), f.is_surjective());
                }
            }
        }
    }

    #[test]
    fn gset_descent() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let free = Obj::gset(z2.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let q = Arr::to_terminal(&free);
        assert!(is_effective(&q));
        let pt = q.cod().clone();
        let h = Arr::to_terminal(&free);
        assert_eq!(descend(&q, &h).unwrap(), Arr::identity(&pt));
    }
}
