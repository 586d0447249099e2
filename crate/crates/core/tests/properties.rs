use ltbq_core::codec::{block_join, block_split, devectorize, scheme_for_blocks, vectorize};
use ltbq_core::morphology::translate;
use ltbq_core::transform::{vec_leq, vec_residual, vec_scale};
use ltbq_core::*;
use proptest::prelude::*;

const DEN: u64 = 12;

fn ex(n: u64) -> UnitValue {
    UnitValue::exact(n, DEN).unwrap()
}

fn vector(len: usize) -> impl Strategy<Value = Vec<UnitValue>> {
    prop::collection::vec((0..=DEN).prop_map(ex), len)
}

fn exact_kind() -> impl Strategy<Value = TNormKind> {
    prop_oneof![
        Just(TNormKind::Godel),
        Just(TNormKind::Lukasiewicz),
        Just(TNormKind::NilpotentMinimum),
    ]
}

fn handedness() -> impl Strategy<Value = Handedness> {
    prop_oneof![Just(Handedness::Left), Just(Handedness::Right)]
}

fn kernel(rows: usize, cols: usize) -> impl Strategy<Value = Kernel<UnitValue>> {
    vector(rows * cols).prop_map(move |e| Kernel::new(rows, cols, e).unwrap())
}

proptest! {
    #[test]
    fn transform_adjunction(
        kind in exact_kind(),
        hand in handedness(),
        p in kernel(4, 3),
        f in vector(4),
        g in vector(3),
    ) {
        let q = TNormQuantale::exact(kind).unwrap();
        let hf = transform_apply(&q, &p, &f, hand).unwrap();
        let lg = inverse_apply(&q, &p, &g, hand).unwrap();
        prop_assert_eq!(vec_leq(&q, &hf, &g), vec_leq(&q, &f, &lg));
    }

    #[test]
    fn inverse_after_transform_is_a_closure(
        kind in exact_kind(),
        p in kernel(4, 3),
        f in vector(4),
        extra in vector(4),
    ) {
        let q = TNormQuantale::exact(kind).unwrap();
        let close = |v: &[UnitValue]| {
            let h = transform_apply(&q, &p, v, Handedness::Left).unwrap();
            inverse_apply(&q, &p, &h, Handedness::Left).unwrap()
        };
        let cf = close(&f);
        prop_assert!(vec_leq(&q, &f, &cf));
        prop_assert_eq!(close(&cf), cf.clone());
        let bigger: Vec<_> = f.iter().zip(&extra).map(|(a, b)| a.max(*b)).collect();
        prop_assert!(vec_leq(&q, &cf, &close(&bigger)));
    }

    #[test]
    fn scalars_commute_with_the_pair(
        kind in exact_kind(),
        p in kernel(3, 3),
        f in vector(3),
        g in vector(3),
        c in (0..=DEN).prop_map(ex),
    ) {
        let q = TNormQuantale::exact(kind).unwrap();
        let h = Handedness::Left;
        prop_assert_eq!(
            transform_apply(&q, &p, &vec_scale(&q, &c, &f, h), h).unwrap(),
            vec_scale(&q, &c, &transform_apply(&q, &p, &f, h).unwrap(), h)
        );
        prop_assert_eq!(
            inverse_apply(&q, &p, &vec_residual(&q, &c, &g, h), h).unwrap(),
            vec_residual(&q, &c, &inverse_apply(&q, &p, &g, h).unwrap(), h)
        );
    }

    #[test]
    fn upper_fuzzy_transform_is_the_module_transform(
        n in 2usize..5,
        extra in 1usize..6,
        f in vector(9),
    ) {
        let l = n + extra;
        let part = FuzzyPartition::lukasiewicz(n, l).unwrap();
        let q = TNormQuantale::exact(TNormKind::Lukasiewicz).unwrap();
        let f = &f[..l];
        prop_assert_eq!(
            f_transform(&part, f, Direction::Up).unwrap(),
            transform_apply(&q, part.kernel(), f, Handedness::Left).unwrap()
        );
        let back = f_inverse(&part, &f_transform(&part, f, Direction::Up).unwrap(), Direction::Up).unwrap();
        prop_assert!(vec_leq(&q, f, &back));
    }

    #[test]
    fn blocks_round_trip(rows in 1usize..4, cols in 1usize..4, a in 1usize..4, b in 1usize..4) {
        let plane: Vec<usize> = (0..rows * a * cols * b).collect();
        let blocks = block_split(&plane, rows * a, cols * b, a, b).unwrap();
        prop_assert_eq!(blocks.len(), rows * cols);
        prop_assert_eq!(block_join(&blocks, rows, cols).unwrap(), plane);
        let first = &blocks[0];
        prop_assert_eq!(&devectorize(&vectorize(first), a, b).unwrap(), first);
    }
}

fn image(side: usize, channels: usize) -> impl Strategy<Value = Image> {
    prop::collection::vec(any::<u8>(), side * side * channels)
        .prop_map(move |bytes| Image::from_u8(side, side, channels, &bytes).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn codec_is_monotone_and_extensive(img in image(8, 1), other in image(8, 1)) {
        let s = scheme_for_blocks(8, 8, 4, 4, 2, 2, false).unwrap();
        let joined: Vec<u8> = img.to_u8().unwrap().iter().zip(other.to_u8().unwrap()).map(|(a, b)| (*a).max(b)).collect();
        let bigger = Image::from_u8(8, 8, 1, &joined).unwrap();
        let small = reconstruct(&compress(&img, &s).unwrap(), &s).unwrap();
        let large = reconstruct(&compress(&bigger, &s).unwrap(), &s).unwrap();
        prop_assert!(img.leq(&small).unwrap());
        prop_assert!(small.leq(&large).unwrap());
    }

    #[test]
    fn channels_are_coded_independently(img in image(8, 3)) {
        let s = scheme_for_blocks(8, 8, 2, 2, 2, 1, false).unwrap();
        let whole = reconstruct(&compress(&img, &s).unwrap(), &s).unwrap();
        for c in 0..3 {
            let single = img.channel(c);
            let alone = reconstruct(&compress(&single, &s).unwrap(), &s).unwrap();
            prop_assert_eq!(alone.plane(0), whole.plane(c));
        }
    }

    #[test]
    fn requantized_pipeline_settles_after_one_pass(img in image(8, 1)) {
        for (a, b, c, d) in [(2, 2, 2, 1), (4, 4, 2, 2)] {
            let s = scheme_for_blocks(8, 8, a, b, c, d, false).unwrap();
            let once = reconstruct(&compress(&img, &s).unwrap(), &s).unwrap().requantize();
            let twice = reconstruct(&compress(&once, &s).unwrap(), &s).unwrap().requantize();
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn morphology_adjunction_and_translation(
        kind in exact_kind(),
        x in vector(16),
        y in vector(16),
        w in (0..=DEN).prop_map(ex),
        hx in -3i64..4,
        hy in -3i64..4,
    ) {
        let se = StructuringElement::new(vec![((0, 0), UnitValue::ONE), ((1, -1), w)]).unwrap();
        let gx = Grid::new(4, 4, x, Boundary::Torus).unwrap();
        let gy = Grid::new(4, 4, y, Boundary::Torus).unwrap();
        let dx = dilate(&gx, &se, kind).unwrap();
        let ey = erode(&gy, &se, kind).unwrap();
        prop_assert_eq!(dx.leq(&gy), gx.leq(&ey));
        let t = translate(&gx, (hx, hy));
        prop_assert_eq!(dilate(&t, &se, kind).unwrap(), translate(&dx, (hx, hy)));
        prop_assert_eq!(erode(&t, &se, kind).unwrap(), translate(&erode(&gx, &se, kind).unwrap(), (hx, hy)));
    }
}
