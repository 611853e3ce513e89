//! Table identities behind the enumeration reductions: shifting the input,
//! adding constants and affine substitutions leave completeness, linearity
//! and `|V_{f+x}|` unchanged.

use carlitz_core::analysis::is_complete;
use carlitz_core::permpoly::linearity;
use carlitz_core::{Field, FieldElement, ValueTable};
use proptest::prelude::*;

fn e(i: u32) -> FieldElement {
    FieldElement::new(i)
}

/// `c ↦ u·t(v·c + w) + z`
fn substitute(
    f: &Field,
    t: &ValueTable,
    u: FieldElement,
    v: FieldElement,
    w: FieldElement,
    z: FieldElement,
) -> ValueTable {
    ValueTable::from_fn(f, |c| f.add(f.mul(u, t.get(f.add(f.mul(v, c), w))), z))
}

/// Plain definition: both `t` and `c ↦ t(c) + c` hit every element.
fn complete_by_definition(f: &Field, t: &ValueTable) -> bool {
    let mut hit_f = vec![false; f.size()];
    let mut hit_g = vec![false; f.size()];
    for c in f.elements() {
        hit_f[t.get(c).index() as usize] = true;
        hit_g[f.add(t.get(c), c).index() as usize] = true;
    }
    hit_f.iter().chain(&hit_g).all(|&h| h)
}

fn check_identities(f: &Field, t: &ValueTable, s: FieldElement, a: FieldElement) {
    let complete = is_complete(f, t).unwrap();
    assert_eq!(complete.is_complete, complete_by_definition(f, t));
    assert_eq!(
        complete.is_complete,
        t.is_permutation() && t.add_identity(f).is_permutation()
    );

    // c ↦ t(c + s) + a is complete iff t is.
    let shifted = substitute(f, t, FieldElement::ONE, FieldElement::ONE, s, a);
    assert_eq!(
        is_complete(f, &shifted).unwrap().is_complete,
        complete.is_complete
    );

    // |V_{f+x}| ignores added constants.
    assert_eq!(
        t.add_constant(f, a).add_identity(f).value_set_size(),
        complete.v_f_plus_x
    );

    // Linearity survives any pre/post affine substitution.
    let l = linearity(f, t).unwrap();
    for u in [FieldElement::ONE, f.add(s, FieldElement::ONE)] {
        for v in [FieldElement::ONE, f.add(a, FieldElement::ONE)] {
            if u.is_zero() || v.is_zero() {
                continue;
            }
            assert_eq!(linearity(f, &substitute(f, t, u, v, s, a)).unwrap(), l);
        }
    }
}

#[test]
fn exhaustive_over_tiny_fields() {
    for q in [3u64, 4] {
        let f = Field::with_order(q).unwrap();
        let n = f.size();
        for code in 0..n.pow(n as u32) {
            let mut rest = code;
            let values = (0..n)
                .map(|_| {
                    let v = rest % n;
                    rest /= n;
                    e(v as u32)
                })
                .collect();
            let t = ValueTable::new(&f, values).unwrap();
            for s in f.elements() {
                for a in f.elements() {
                    check_identities(&f, &t, s, a);
                }
            }
        }
    }
}

fn field_and_table() -> impl Strategy<Value = (Field, Vec<u32>, u32, u32, u32, u32)> {
    prop::sample::select(vec![5u64, 7, 8, 9, 11, 13, 16, 25, 27])
        .prop_flat_map(|q| {
            let q32 = q as u32;
            (
                Just(q),
                prop::collection::vec(0..q32, q as usize),
                0..q32,
                0..q32,
                1..q32,
                1..q32,
            )
        })
        .prop_map(|(q, values, s, a, u, v)| (Field::with_order(q).unwrap(), values, s, a, u, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn identities_hold_for_random_tables((f, values, s, a, _, _) in field_and_table()) {
        let t = ValueTable::from_indices(&f, &values).unwrap();
        check_identities(&f, &t, e(s), e(a));
    }

    #[test]
    fn affine_substitution_keeps_linearity((f, values, s, a, u, v) in field_and_table()) {
        let t = ValueTable::from_indices(&f, &values).unwrap();
        let g = substitute(&f, &t, e(u), e(v), e(s), e(a));
        prop_assert_eq!(linearity(&f, &g).unwrap(), linearity(&f, &t).unwrap());
    }

    #[test]
    fn permutation_shift_keeps_completeness((f, values, s, a, _, _) in field_and_table()) {
        // Random tables are rarely complete; start from a permutation.
        let mut perm: Vec<u32> = (0..f.order()).collect();
        for (i, &r) in values.iter().enumerate() {
            perm.swap(i, r as usize);
        }
        let t = ValueTable::from_indices(&f, &perm).unwrap();
        let g = substitute(&f, &t, FieldElement::ONE, FieldElement::ONE, e(s), e(a));
        prop_assert_eq!(
            is_complete(&f, &g).unwrap().is_complete,
            complete_by_definition(&f, &t)
        );
    }
}
