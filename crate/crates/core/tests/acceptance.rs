//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line (run with `--nocapture` to see them). Every tolerance is
//! pinned here as a constant.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use quasiline::chain_analysis::{
    detailed_balance_exact, gibbs_vector_f64, stationary_from_eigen, transition_matrix,
};
use quasiline::decode::{
    decode_experiment, distinguisher, exact_z_oracle, Decoder, Verdict, DEFAULT_SUCCESS_RATIO,
};
use quasiline::expander::certify_magnifier;
use quasiline::field::{field_polynomial, univariate_roots_in_z};
use quasiline::gadget::{
    build_reduction, fiber_count, h_gadget_graph, internal_cut_audit, GadgetKind,
};
use quasiline::generate::{random_bipartite_cubic, random_cubic, random_spins};
use quasiline::glauber::{ChainState, GlauberChain};
use quasiline::graph::{line_graph, Graph, Multigraph};
use quasiline::maxcut::{flip_local_search, is_local_optimum, maxcut_exact};
use quasiline::recognition::{is_quasi_line, validate_krausz_cover};
use quasiline::scalar::{parse_mu, MuSpec, Rational};
use quasiline::spin::SpinConfig;
use quasiline::torpid::{
    bottleneck_sums, certified_magnifier_base, equatorial_cut_bound, escape_time_experiment,
    median_sorted, omega_classify, omega_conductance, sign_test_p_greater, EscapeConfig,
    OmegaClass,
};
use quasiline::zsigma::{
    all_fiber_polynomials, fiber_polynomial, fiber_polynomials_by_enumeration, sandwich_check_all,
};

// pinned tolerances and thresholds
const STATIONARY_TOL: f64 = 1e-12;
const EMPIRICAL_TV_TOL: f64 = 0.02;
const EMPIRICAL_STEPS: u64 = 1_000_000;
const SIGN_TEST_ALPHA: f64 = 0.05;
const CONTROL_FACTOR: u64 = 10;
const ROOT_IMAG_TOL: f64 = 1e-7;
const DECODER_RATIO: (u64, u64) = DEFAULT_SUCCESS_RATIO; // 997/1000
const ESCAPE_REPLICATES: usize = 300; // >= the required 20
const ESCAPE_STEP_CAP: u64 = 100_000_000;

fn pass(criterion: &str) {
    println!("ACCEPTANCE {criterion}: PASS");
}

#[test]
fn a01_gadget_audit() {
    let t0 = std::time::Instant::now();
    let h = internal_cut_audit(GadgetKind::H);
    assert_eq!(h.config_count, 512);
    assert_eq!(h.max_cut, 18);
    assert_eq!(h.argmax.len(), 2);
    assert_eq!(h.second_best, 17);

    let j = internal_cut_audit(GadgetKind::J);
    assert_eq!(j.config_count, 64);
    assert_eq!(j.max_cut, 9);
    assert_eq!(j.argmax.len(), 2);
    assert_eq!(j.second_best, 6);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "audit took {elapsed:?}");
    pass("01 gadget-audit (H: 512 -> max 18 x2, else <= 17; J: 64 -> max 9 x2, else <= 6)");
}

#[test]
fn a02_fiber_count() {
    for (base, expected_exponent) in [(Graph::complete(4), 32u32), (Graph::complete_bipartite(3, 3), 48)] {
        let out = build_reduction(&base, GadgetKind::H).unwrap();
        let fc = fiber_count(&out.layout);
        assert_eq!(fc.per_gadget, 256, "per-gadget majority count");
        assert_eq!(fc.total, BigUint::one() << expected_exponent);
        // the structural count matches the actual mass of every fiber
        for bits in 0..(1u64 << base.n().min(4)) {
            let sigma = SpinConfig::from_bits(bits, base.n());
            if base.n() <= 4 {
                let poly = fiber_polynomial(&out, &sigma).unwrap();
                assert_eq!(poly.total_mass(), fc.total);
            }
        }
    }
    pass("02 fiber-count (per gadget 256 = 2^8, total 2^(8n))");
}

#[test]
fn a03_sandwich_k4() {
    let t0 = std::time::Instant::now();
    let out = build_reduction(&Graph::complete(4), GadgetKind::H).unwrap();
    let reports = sandwich_check_all(&out).unwrap();
    assert_eq!(reports.len(), 16);
    for r in &reports {
        assert!(r.pass, "{r:?}");
        assert!(r.lower_bound_holds && r.upper_bound_holds);
        // max degree exactly 72 + c and coefficient mass exactly 2^32
        assert_eq!(r.actual_degree, Some(72 + r.base_cut));
        assert_eq!(r.mass, (BigUint::one() << 32u32).to_string());
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "sandwich took {elapsed:?}");
    pass("03 sandwich-bound on K4 (all 16 sigma, coefficient dominance for mu >= 1)");
}

#[test]
fn a04_oracle_equivalence() {
    let t0 = std::time::Instant::now();
    let out = build_reduction(&Graph::complete(4), GadgetKind::J).unwrap();
    assert_eq!(out.graph.n(), 24);
    let brute = fiber_polynomials_by_enumeration(&out, 24).unwrap();
    for bits in 0..16u64 {
        let sigma = SpinConfig::from_bits(bits, 4);
        let marginal = fiber_polynomial(&out, &sigma).unwrap();
        for mu_s in ["1", "2", "3"] {
            let mu = parse_mu(mu_s).unwrap();
            assert_eq!(
                marginal.eval_exact(&mu),
                brute[bits as usize].eval_exact(&mu),
                "sigma {sigma} at mu {mu_s}"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "oracle check took {elapsed:?}");
    pass("04 oracle-equivalence (marginalized Z_sigma == 2^24 brute force on J(K4) at mu = 1,2,3)");
}

#[test]
fn a05_cubic_cut_floor() {
    let mut rng = quasiline::rng::rng_from_seed(1234);
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 100 {
        let n = 4 + 2 * (checked % 9); // 4..=20
        seed += 1;
        let Ok(g) = random_cubic(n, seed) else {
            continue;
        };
        let start = SpinConfig::new(random_spins(n, &mut rng)).unwrap();
        let local = flip_local_search(&g, &start).unwrap();
        assert!(is_local_optimum(&g, &local.config));
        assert!(
            local.cut_size >= n,
            "local search cut {} < n {n} (seed {seed})",
            local.cut_size
        );
        let exact = maxcut_exact(&g).unwrap();
        assert!(exact.cut_size >= n);
        assert!(exact.cut_size >= local.cut_size);
        checked += 1;
    }
    pass("05 cubic-cut-floor (100 random cubic graphs: local search and optimum >= n)");
}

#[test]
fn a06_structure() {
    let bases = vec![
        Graph::complete(4),
        Graph::complete_bipartite(3, 3),
        random_cubic(6, 11).unwrap(),
        random_cubic(8, 12).unwrap(),
        random_cubic(10, 13).unwrap(),
    ];
    for base in &bases {
        let n = base.n();
        let h = build_reduction(base, GadgetKind::H).unwrap();
        assert_eq!(h.graph.n(), 9 * n);
        assert_eq!(h.graph.max_degree(), 8);
        let (quasi, witness) = is_quasi_line(&h.graph);
        assert!(quasi, "witness {witness:?}");
        let (cover_ok, violations) = validate_krausz_cover(&h.graph, h.krausz.as_ref().unwrap());
        assert!(cover_ok, "{violations:?}");

        let j = build_reduction(base, GadgetKind::J).unwrap();
        assert_eq!(j.graph.n(), 6 * n);
        assert!(j.graph.max_degree() <= 6);
    }
    pass("06 structure (G*: 9n vertices, degree 8, quasi-line, Krausz; Gdagger: 6n, degree <= 6)");
}

#[test]
fn a07_bottleneck_inequality() {
    let mu76 = BigUint::one() << 76;
    for size in [3usize, 4] {
        let (seed, base) = certified_magnifier_base(size, 42 + 1000 * size as u64).unwrap();
        let cert = certify_magnifier(&base, Ratio::new(1, 8)).unwrap();
        assert!(cert.is_c_magnifier, "base for size {size} must certify");

        let sums = bottleneck_sums(&base).unwrap();
        assert!(
            sums.equal_class_dominance,
            "balanced-class dominance fails at size {size}"
        );
        assert!(
            sums.unbalanced_peak_present,
            "unbalanced peak missing at size {size}"
        );
        assert!(
            sums.final_inequality_at_2pow76,
            "final 2^-n inequality fails at size {size}"
        );

        // conductance form: ratio <= 2^-n at mu = 2^76, so the mixing
        // lower bound is at least 2^(n-2)
        let report = omega_conductance(&sums, &mu76);
        let ratio = report.ratio.as_exact().unwrap().clone();
        let threshold = Rational::new(1.into(), BigUint::from(1u8 << size).into());
        assert!(ratio <= threshold, "ratio > 2^-{size}");
        let bound = report.mixing_time_lower_bound();
        let min_bound = Rational::from_integer((1u64 << (size - 2)).into());
        assert!(bound.as_exact().unwrap() >= &min_bound);

        println!(
            "  size {size}: base seed {seed}, minimal mu for the 2^-n inequality = {}",
            sums.minimal_mu
                .as_ref()
                .map(|m| m.to_string())
                .unwrap_or_else(|| "none".into())
        );
    }
    pass("07 bottleneck-inequality (classes at mu = 2^76, dominance for all mu >= 1; sizes 3 and 4)");
}

#[test]
fn a08_equatorial_cut_bound() {
    for size in [3usize, 4] {
        let (_, base) = certified_magnifier_base(size, 42 + 1000 * size as u64).unwrap();
        let n = base.n();
        let mut balanced = 0;
        for bits in 0..(1u64 << n) {
            let sigma = SpinConfig::from_bits(bits, n);
            if omega_classify(&base, &sigma).unwrap() == OmegaClass::Equal {
                let report = equatorial_cut_bound(&base, &sigma).unwrap();
                assert!(report.holds, "cut {} at size {size}", report.cut);
                balanced += 1;
            }
        }
        assert!(balanced > 0);
    }
    pass("08 equatorial-cut-bound (every balanced sigma: |cut| <= 3n - n/4)");
}

#[test]
fn a09_glauber_correctness() {
    // exact checks on all test graphs with n <= 10
    let corpus: Vec<(Graph, &str)> = vec![
        (Graph::complete(2), "3"),
        (Graph::path(3), "2"),
        (Graph::complete(3), "2"),
        (Graph::star(3), "5/2"),
        (Graph::cycle(5), "7/3"),
        (Graph::complete(4), "3/2"),
        (random_cubic(8, 5).unwrap(), "2"),
        (random_bipartite_cubic(4, 7).unwrap(), "3"),
        (random_cubic(10, 2).unwrap(), "2"),
    ];
    for (g, mu_s) in &corpus {
        let mu = parse_mu(mu_s).unwrap();
        let t = transition_matrix::<Rational>(g, &mu).unwrap();
        for x in 0..t.dimension() as u64 {
            assert_eq!(t.row_sum(x), Rational::one());
        }
        assert!(detailed_balance_exact(&t, &mu), "detailed balance on n={}", g.n());
        let eigen = stationary_from_eigen(&t, g, &mu).unwrap();
        let gibbs = gibbs_vector_f64(g, &mu).unwrap();
        for (a, b) in eigen.iter().zip(&gibbs) {
            assert!(
                (a - b).abs() < STATIONARY_TOL,
                "stationary mismatch on n={}: {a} vs {b}",
                g.n()
            );
        }
    }

    // empirical occupation histograms on n <= 6
    let empirical: Vec<(Graph, &str)> = vec![
        (Graph::complete(2), "3"),
        (Graph::path(3), "2"),
        (Graph::star(3), "2"),
        (Graph::cycle(5), "2"),
        (Graph::complete_bipartite(3, 3), "3/2"),
    ];
    for (g, mu_s) in &empirical {
        let mu = parse_mu(mu_s).unwrap();
        let chain = GlauberChain::new(g, &mu).unwrap();
        let mut state = ChainState::new(SpinConfig::all_plus(g.n()), 1, 0);
        let mut bits = state.config.to_bits();
        let mut hist = vec![0u64; 1 << g.n()];
        for _ in 0..EMPIRICAL_STEPS {
            if let Some(v) = chain.step(&mut state) {
                bits ^= 1 << v;
            }
            hist[bits as usize] += 1;
        }
        let pi = gibbs_vector_f64(g, &mu).unwrap();
        let tv = 0.5
            * hist
                .iter()
                .zip(&pi)
                .map(|(&h, p)| (h as f64 / EMPIRICAL_STEPS as f64 - p).abs())
                .sum::<f64>();
        assert!(tv <= EMPIRICAL_TV_TOL, "TV {tv} on n={}", g.n());
    }
    pass("09 glauber-correctness (detailed balance, eigen-stationary within 1e-12, TV <= 0.02)");
}

#[test]
fn a10_torpid_trend() {
    let cfg = EscapeConfig {
        sizes: vec![3, 4],
        mu: parse_mu("16").unwrap(),
        replicates: ESCAPE_REPLICATES,
        step_cap: ESCAPE_STEP_CAP,
        seed: 42,
    };
    let outcome = escape_time_experiment(&cfg, 4).unwrap();

    let median3 = outcome.medians[0].1;
    let median4 = outcome.medians[1].1;
    assert!(
        median4 > median3,
        "median did not increase: {median3} -> {median4}"
    );

    let h3: Vec<u64> = outcome
        .rows
        .iter()
        .filter(|r| r.size == 3)
        .map(|r| r.hit_time)
        .collect();
    let h4: Vec<u64> = outcome
        .rows
        .iter()
        .filter(|r| r.size == 4)
        .map(|r| r.hit_time)
        .collect();
    let pairs: Vec<(u64, u64)> = h3.iter().copied().zip(h4.iter().copied()).collect();
    let p = sign_test_p_greater(&pairs);
    assert!(p < SIGN_TEST_ALPHA, "sign test p = {p}");

    let control4 = outcome.control_medians[1].1;
    assert!(
        median4 >= CONTROL_FACTOR * control4,
        "escape median {median4} < {CONTROL_FACTOR}x control {control4}"
    );

    let mut sorted3 = h3.clone();
    sorted3.sort_unstable();
    assert_eq!(median_sorted(&sorted3), median3);
    println!(
        "  medians: size 3 -> {median3}, size 4 -> {median4}; control(4) = {control4}; sign test p = {p:.4}"
    );
    pass("10 torpid-trend (median escape time grows 3 -> 4 at mu = 16; >= 10x the line-graph control)");
}

#[test]
fn a11_decoder_and_distinguisher() {
    let base = Graph::complete(4);
    let report = decode_experiment(&base, &parse_mu("16").unwrap(), 20_000, 4242, DECODER_RATIO)
        .unwrap();
    assert_eq!(report.max_cut, 4);

    // monotone sweep, eventually above 3/4
    let mut last = -1.0f64;
    for point in &report.sweep {
        assert!(
            point.probability_f64 >= last - 1e-15,
            "sweep not monotone at {}",
            point.mu
        );
        last = point.probability_f64;
    }
    assert!(report.sweep.last().unwrap().meets_three_quarters);
    let minimal: BigUint = report.minimal_mu.as_ref().unwrap().parse().unwrap();

    // the reported threshold is sharp: >= 3/4 there, < 3/4 just below
    let decoder = Decoder::new(&base, DECODER_RATIO).unwrap();
    let three_quarters = Rational::new(3.into(), 4.into());
    let at = decoder
        .success_probability(&Rational::from_integer(minimal.clone().into()))
        .unwrap();
    assert!(at >= three_quarters);
    let below = decoder
        .success_probability(&Rational::from_integer(
            (minimal - BigUint::one()).into(),
        ))
        .unwrap();
    assert!(below < three_quarters);

    // empirical frequency within 3 binomial sigmas of the exact value
    let freq = report.empirical_frequency.unwrap();
    let sigma = report.empirical_sigma.unwrap();
    assert!((freq - report.exact_success_probability_f64).abs() <= 3.0 * sigma);

    // distinguisher against the exact-Z oracle, with factor-2 robustness
    let n = base.n();
    let mu = parse_mu(&format!("2^{}", 9 * n + 2)).unwrap();
    let z = exact_z_oracle(&base, &mu).unwrap();
    let two = Rational::from_integer(2.into());
    for c in 0..=5usize {
        let expected = if report.max_cut > c {
            Verdict::MaxcutExceeds
        } else {
            Verdict::MaxcutAtMost
        };
        for oracle in [z.clone(), &z * &two, &z / &two] {
            assert_eq!(distinguisher(&base, &mu, c, &oracle).unwrap(), expected);
        }
    }
    assert!(distinguisher(&base, &parse_mu("2^37").unwrap(), 3, &z).is_err());
    println!(
        "  K4 decoder: minimal mu for 3/4 success = {}",
        report.minimal_mu.as_ref().unwrap()
    );
    pass("11 decoder (success monotone in mu, crosses 3/4) and distinguisher (exact oracle, factor-2 robust)");
}

#[test]
fn a12_real_rootedness_probe() {
    // line graphs: all roots on the real axis within tolerance
    let petersen = Graph::petersen();
    let mut sub_a = petersen.edges();
    sub_a.retain(|&e| !matches!(e, (0, 1) | (1, 2) | (2, 3)));
    let mut sub_b = petersen.edges();
    sub_b.retain(|&e| !matches!(e, (0, 5) | (1, 6) | (2, 7)));

    let corpus: Vec<(&str, Graph)> = vec![
        ("L(K4)", line_graph(&Multigraph::from(&Graph::complete(4)))),
        (
            "L(Petersen - 3 outer edges)",
            line_graph(&Multigraph::from_edges(10, &sub_a).unwrap()),
        ),
        (
            "L(Petersen - 3 spokes)",
            line_graph(&Multigraph::from_edges(10, &sub_b).unwrap()),
        ),
    ];
    for (name, g) in &corpus {
        assert!(g.n() <= 12, "{name} has {} vertices", g.n());
        let fp = field_polynomial(g).unwrap();
        let report = univariate_roots_in_z(&fp, &MuSpec::Real(2.0)).unwrap();
        assert!(report.converged.iter().all(|&c| c), "{name} residuals");
        assert!(
            report.max_abs_imag < ROOT_IMAG_TOL,
            "{name}: max |Im| = {}",
            report.max_abs_imag
        );
    }

    // probe (reported, not asserted): the 9-vertex gadget's roots
    let fp = field_polynomial(&h_gadget_graph()).unwrap();
    let report = univariate_roots_in_z(&fp, &MuSpec::Real(2.0)).unwrap();
    println!("  H-gadget root set at mu = 2 (probe only):");
    for (z, r) in report.roots.iter().zip(&report.residuals) {
        println!("    {:+.6} {:+.6}i   (residual {r:.1e})", z.re, z.im);
    }
    for mu in [1.1, 1.5, 2.0, 4.0, 16.0, 100.0] {
        let sweep = univariate_roots_in_z(&fp, &MuSpec::Real(mu)).unwrap();
        println!("  H-gadget max |Im| at mu = {mu}: {:.3e}", sweep.max_abs_imag);
    }
    pass("12 real-rootedness-probe (line graphs real-rooted at mu = 2 within 1e-7; gadget roots reported)");
}

// cross-criterion consistency: the class sums of criterion 7 add up to the
// total fiber mass implied by criterion 2
#[test]
fn a13_cross_totals() {
    let base = Graph::complete_bipartite(3, 3);
    let sums = bottleneck_sums(&base).unwrap();
    let total: BigUint = sums
        .class_polys
        .iter()
        .map(|p| p.total_mass())
        .sum();
    // 2^(2n) base configurations, each with fiber mass 2^(8 * 2n)
    assert_eq!(total, BigUint::one() << (6 + 48));
    let plus = &sums.class_polys[1];
    let minus = &sums.class_polys[2];
    assert_eq!(plus, minus, "negation symmetry of the unbalanced classes");

    let out = build_reduction(&base, GadgetKind::H).unwrap();
    let polys = all_fiber_polynomials(&out).unwrap();
    assert_eq!(polys.len(), 64);
    pass("13 cross-totals (class sums account for every configuration; plus/minus symmetric)");
}
