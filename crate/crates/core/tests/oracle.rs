//! Cross-check of the computed constant against values frozen from an
//! independent high-precision evaluation (bisection-only, 40-digit
//! arithmetic, implemented outside this crate). Covers every exponent pair
//! used in the acceptance suite, both branch cases, and points near the
//! domain boundaries.

#![allow(clippy::excessive_precision)] // frozen oracle literals

use bellman_constant::constant::{bellman_t, Case, DomainPoint};
use bellman_constant::kernel::Exponents;

const FIXTURE: [(f64, f64, f64, f64, f64, Case); 40] = [
    (2.0, 1.5, 0.2, 0.58541019662496845, 1.8893073028625456, Case::A),
    (2.0, 1.5, 0.2, 0.77888543819998318, 1.8943792745809069, Case::A),
    (2.0, 1.5, 0.2, 0.94472135954999579, 1.8878027893696632, Case::A),
    (2.0, 1.5, 0.6, 0.83094750193111253, 1.6282428088480677, Case::A),
    (2.0, 1.5, 0.6, 0.90983866769659335, 1.6298389079974303, Case::A),
    (2.0, 1.5, 0.6, 0.97745966692414834, 1.6054022769633461, Case::A),
    (3.0, 2.0, 0.2, 0.58541019662496845, 1.4478562939772759, Case::A),
    (3.0, 2.0, 0.2, 0.77888543819998318, 1.4525827308735606, Case::A),
    (3.0, 2.0, 0.2, 0.94472135954999579, 1.4496731005514550, Case::A),
    (3.0, 2.0, 0.6, 0.83094750193111253, 1.3249815632130296, Case::A),
    (3.0, 2.0, 0.6, 0.90983866769659335, 1.3300551201778421, Case::A),
    (3.0, 2.0, 0.6, 0.97745966692414834, 1.3176385201225952, Case::A),
    (2.5, 1.2, 0.2, 0.85515310060765375, 1.5950565671344019, Case::A),
    (2.5, 1.2, 0.2, 0.92274832032408200, 1.5996635988968910, Case::A),
    (2.5, 1.2, 0.2, 0.98068708008102050, 1.6006158888069761, Case::A),
    (2.5, 1.2, 0.6, 0.95061822466331296, 1.4260342789698259, Case::A),
    (2.5, 1.2, 0.6, 0.97366305315376691, 1.4330541955080076, Case::A),
    (2.5, 1.2, 0.6, 0.99341576328844173, 1.4314184099822130, Case::A),
    (4.0, 3.0, 0.2, 0.50649639200150455, 1.3017016878317455, Case::A),
    (4.0, 3.0, 0.2, 0.73679807573413576, 1.3030107190991466, Case::A),
    (4.0, 3.0, 0.2, 0.93419951893353394, 1.2994860680854801, Case::A),
    (4.0, 3.0, 0.6, 0.78353399567350942, 1.2229117705015562, Case::A),
    (4.0, 3.0, 0.6, 0.88455146435920502, 1.2223912136620003, Case::A),
    (4.0, 3.0, 0.6, 0.97113786608980126, 1.2099514598669838, Case::A),
    (1.8, 1.3, 0.2, 0.66015452927815791, 2.1055086933016912, Case::A),
    (1.8, 1.3, 0.2, 0.81874908228168422, 2.1125135703274442, Case::A),
    (1.8, 1.3, 0.2, 0.95468727057042105, 2.1076210713650497, Case::A),
    (1.8, 1.3, 0.6, 0.86925280474357242, 1.7702712236952328, Case::A),
    (1.8, 1.3, 0.6, 0.93026816252990529, 1.7752037713553137, Case::A),
    (1.8, 1.3, 0.6, 0.98256704063247632, 1.7541735787281241, Case::A),
    (2.0, 1.5, 0.75, 0.86669527676551645, 1.4521850678230450, Case::B),
    (2.0, 1.5, 0.75, 0.86870489570874987, 1.4585761097604274, Case::B),
    (3.0, 2.0, 0.75, 0.86669527676551645, 1.2186879305338908, Case::B),
    (3.0, 2.0, 0.75, 0.86870489570874987, 1.2227718592552539, Case::B),
    (2.5, 1.2, 0.75, 0.96255688335930552, 1.3279571251957795, Case::B),
    (2.5, 1.2, 0.75, 0.96312135245439136, 1.3287517462203116, Case::B),
    (4.0, 3.0, 0.75, 0.82635440316253839, 1.1350393486156573, Case::B),
    (4.0, 3.0, 0.75, 0.82897217597918354, 1.1410857395877943, Case::B),
    (1.8, 1.3, 0.75, 0.89824594741045512, 1.5723214823893154, Case::B),
    (1.8, 1.3, 0.75, 0.89977992810275981, 1.5765617381455288, Case::A),
];

#[test]
fn bellman_matches_independent_oracle() {
    for &(p, q, s1, s2, t_expected, case_expected) in FIXTURE.iter() {
        let exps = Exponents::new(p, q).unwrap();
        let s = DomainPoint::new(s1, s2, &exps).unwrap();
        let r = bellman_t(&s, &exps).unwrap();
        assert_eq!(
            r.case, case_expected,
            "case mismatch at p={p} q={q} s1={s1} s2={s2}"
        );
        assert!(
            (r.t - t_expected).abs() <= 1e-10,
            "t mismatch at p={p} q={q} s1={s1} s2={s2}: {} vs {t_expected}",
            r.t
        );
    }
}
