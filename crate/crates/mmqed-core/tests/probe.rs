//! Scratch measurements; not part of the suite.

use mmqed_core::assembler::{
    assemble_bqm_dse, assemble_length_gauge, build_fock_basis, effective_single_mode,
    ground_state, photon_occupation, CouplingConfig, EffectiveStrategy, OccupationGauge,
};
use mmqed_core::continuum::{
    coupling_vector, multimode_coupling_g, renormalized_mass, ModeContinuum, Species,
};
use mmqed_core::linalg::dense_sym_eig;
use mmqed_core::matter::{
    atom_dipole, atom_hamiltonian, eigensolve_matter, h2_dipole, h2_electronic_hamiltonian,
    AtomModel, Boundary, Grid1D, H2Model,
};
use mmqed_core::observables::{
    density, integrated_density_diff, matter_density, matter_state_density,
};
use mmqed_core::popes::{
    dissociation_energy, morse_fit, pes_scan, separation_grid, PESCurve, PesLabel,
};

const CACHE: &str = "/root/notes/probe_cache";

fn cached_scan(name: &str, scan: impl FnOnce() -> PESCurve, label: PesLabel) -> PESCurve {
    let path = format!("{CACHE}/{name}.csv");
    if let Ok(text) = std::fs::read_to_string(&path) {
        let (mut r, mut e) = (Vec::new(), Vec::new());
        for line in text.lines().skip(1) {
            let mut it = line.split(',');
            r.push(it.next().unwrap().parse().unwrap());
            e.push(it.next().unwrap().parse().unwrap());
        }
        return PESCurve::new(r, e, label, 0, 0.0).unwrap();
    }
    let t = std::time::Instant::now();
    let curve = scan();
    println!("{name}: scanned in {:?}", t.elapsed());
    std::fs::create_dir_all(CACHE).unwrap();
    let mut text = String::from("r,e\n");
    for (r, e) in curve.r().iter().zip(curve.energies()) {
        text.push_str(&format!("{r:.17e},{e:.17e}\n"));
    }
    std::fs::write(&path, text).unwrap();
    curve
}

fn paper_grid() -> Grid1D {
    Grid1D::centered(200, 0.35, Boundary::HardWall).unwrap()
}

fn fit_report(tag: &str, curve: &PESCurve, mu_n: f64) {
    let r = curve.r();
    let e = curve.energies();
    let m = e
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let (r_par, e_par) = curve.equilibrium();
    let d_e = dissociation_energy(curve).unwrap();
    println!(
        "{tag}: grid min ({:.2}, {:.6})  parabolic ({:.4}, {:.6})  d_e {:.6}",
        r[m], e[m], r_par, e_par, d_e
    );
    let protocols: [(&str, f64, f64); 2] = [
        ("grid", r[m], e[m]),
        ("parab", r_par, e_par),
    ];
    let windows = [
        None,
        Some((0.9, 5.0)),
        Some((1.2, 6.0)),
        Some((r_par - 0.7, r_par + 2.5)),
    ];
    for (pname, r_eq, c) in protocols {
        let de = e[e.len() - 1] - c;
        for window in windows {
            match morse_fit(curve, r_eq, de, c, mu_n, window) {
                Ok(fit) => println!(
                    "  {pname} {window:?}: a {:.6}  omega_e {:.7}  residual {:.3e}",
                    fit.a, fit.omega_e, fit.residual
                ),
                Err(err) => println!("  {pname} {window:?}: ERROR {err}"),
            }
        }
    }
}

#[test]
fn probe_h2_fit_variants() {
    let model = H2Model::standard();
    let r = separation_grid(0.1, 9.0).unwrap();
    let bare = cached_scan(
        "h2_bare_paper",
        || {
            pes_scan(
                &paper_grid(),
                &r,
                &model,
                1,
                None,
                &CouplingConfig::length(),
                PesLabel::Nrqed,
            )
            .unwrap()
        },
        PesLabel::Nrqed,
    );
    fit_report("bare", &bare, model.mu_n());
    println!("targets: bare omega_e 0.020455 (band 0.019955..0.020955)");
}

#[test]
fn probe_h2_qm_paper() {
    let model = H2Model::standard();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes50 = base
        .truncated(50)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    let qm_model = mmqed_core::popes::renormalized_h2_model(&model, &modes50).unwrap();
    println!(
        "qm masses: m_el {:.6}  m_nuc {:.4}  mu_n {:.4}",
        qm_model.m_el,
        qm_model.m_nuc,
        qm_model.mu_n()
    );
    let r = separation_grid(0.1, 9.0).unwrap();
    let qm = cached_scan(
        "h2_qm50_paper",
        || {
            pes_scan(
                &paper_grid(),
                &r,
                &qm_model,
                1,
                None,
                &CouplingConfig::length(),
                PesLabel::Qm,
            )
            .unwrap()
        },
        PesLabel::Qm,
    );
    fit_report("qm50", &qm, qm_model.mu_n());
    println!("targets: a_qm 1.1306567 (5% band 1.07412..1.18719), omega_e 0.0202009");
}

#[test]
fn probe_h2_nrqed_paper() {
    let model = H2Model::standard();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes50 = base
        .truncated(50)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    let r = separation_grid(0.1, 9.0).unwrap();
    let nrqed = cached_scan(
        "h2_nrqed50_paper_ns5",
        || {
            pes_scan(
                &paper_grid(),
                &r,
                &model,
                5,
                Some(&modes50),
                &CouplingConfig::length(),
                PesLabel::Nrqed,
            )
            .unwrap()
        },
        PesLabel::Nrqed,
    );
    fit_report("nrqed50", &nrqed, model.mu_n());
    println!("targets: a_nrqed 1.18811731 (5% band 1.12871..1.24752), omega_e 0.0217312");
}

#[test]
fn probe_desk_atom_deltas() {
    let t0 = std::time::Instant::now();
    let grid = Grid1D::centered(800, 0.15, Boundary::HardWall).unwrap();
    let h = atom_hamiltonian(&grid, &AtomModel::standard()).unwrap();
    let mb = eigensolve_matter(&h, &grid, 6, &atom_dipole(&grid)).unwrap();
    let spectrum = mb.spectrum();
    println!("atom solve: {:?}", t0.elapsed());

    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes50 = base
        .truncated(50)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    let fock50 = build_fock_basis(50).unwrap();
    let h50 =
        assemble_length_gauge(&spectrum, &modes50, &fock50, &CouplingConfig::length()).unwrap();
    let gs50 = ground_state(&h50, &fock50, 6).unwrap();
    let nrqed50 = density(&gs50, &mb).unwrap();

    let bare = matter_density(&mb, 0).unwrap();
    let dn_bare = integrated_density_diff(&nrqed50, &bare).unwrap();

    let dse = dense_sym_eig(&assemble_bqm_dse(&spectrum, &modes50).unwrap().to_dense()).unwrap();
    let dse_density = matter_state_density(&mb, &dse.vectors[0]).unwrap();
    let dn_dse = integrated_density_diff(&nrqed50, &dse_density).unwrap();

    let d = coupling_vector(&modes50, &Species::electron());
    let g = multimode_coupling_g(&modes50, &d).unwrap();
    let m_e = renormalized_mass(1.0, g).unwrap();
    let hq = atom_hamiltonian(&grid, &AtomModel::standard().with_mass(m_e)).unwrap();
    let mbq = eigensolve_matter(&hq, &grid, 1, &atom_dipole(&grid)).unwrap();
    let qm = matter_density(&mbq, 0).unwrap();
    let dn_qm = integrated_density_diff(&nrqed50, &qm).unwrap();

    println!("N_p=50: dn_bare {dn_bare:.4e}  dn_dse {dn_dse:.4e}  dn_qm {dn_qm:.4e}  m_e {m_e:.6}");

    let occ = photon_occupation(&gs50, &spectrum, &modes50, OccupationGauge::Velocity).unwrap();
    let decreasing = occ.windows(2).filter(|w| w[0] > w[1]).count();
    println!("decreasing steps: {} of {}", decreasing, occ.len() - 1);
    println!("total: {:?}", t0.elapsed());
}

#[test]
fn probe_full_continuum_desk() {
    let grid = Grid1D::centered(800, 0.15, Boundary::HardWall).unwrap();
    let h = atom_hamiltonian(&grid, &AtomModel::standard()).unwrap();
    let mb = eigensolve_matter(&h, &grid, 6, &atom_dipole(&grid)).unwrap();
    let spectrum = mb.spectrum();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes = base.with_uniform_coupling(0.0019).unwrap();
    let fock = build_fock_basis(200).unwrap();
    let h200 = assemble_length_gauge(&spectrum, &modes, &fock, &CouplingConfig::length()).unwrap();
    let t = std::time::Instant::now();
    let gs = ground_state(&h200, &fock, 6).unwrap();
    println!("solve 200 (dim {}): {:?}", 6 * fock.dim(), t.elapsed());
    let nrqed = density(&gs, &mb).unwrap();
    let bare = matter_density(&mb, 0).unwrap();
    let dse = dense_sym_eig(&assemble_bqm_dse(&spectrum, &modes).unwrap().to_dense()).unwrap();
    let dse_density = matter_state_density(&mb, &dse.vectors[0]).unwrap();
    println!(
        "N_p=200: dn_bare {:.4e}  dn_dse {:.4e}",
        integrated_density_diff(&nrqed, &bare).unwrap(),
        integrated_density_diff(&nrqed, &dse_density).unwrap()
    );
    let occ = photon_occupation(&gs, &spectrum, &modes, OccupationGauge::Velocity).unwrap();
    let decreasing = occ.windows(2).filter(|w| w[0] > w[1]).count();
    println!("decreasing steps at 200: {} of {}", decreasing, occ.len() - 1);
    for strategy in [EffectiveStrategy::Lowest, EffectiveStrategy::Averaged] {
        let single = effective_single_mode(&modes, strategy).unwrap();
        let fock1 = build_fock_basis(1).unwrap();
        let h1 =
            assemble_length_gauge(&spectrum, &single, &fock1, &CouplingConfig::length()).unwrap();
        let gs1 = ground_state(&h1, &fock1, 6).unwrap();
        let dn = integrated_density_diff(&nrqed, &density(&gs1, &mb).unwrap()).unwrap();
        println!(
            "single {strategy:?} omega {:.4}: dn {dn:.4e}",
            single.frequencies()[0]
        );
    }
}

#[test]
fn probe_desk_trends() {
    use std::fmt::Write as _;
    let t0 = std::time::Instant::now();
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let r = separation_grid(0.2, 9.0).unwrap();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let mut report = String::new();
    for np in [10usize, 30, 50] {
        let modes = base
            .truncated(np)
            .unwrap()
            .with_uniform_coupling(0.0019)
            .unwrap();
        let nrqed = cached_scan(
            &format!("h2_nrqed{np}_desk_ns5"),
            || {
                pes_scan(
                    &grid,
                    &r,
                    &model,
                    5,
                    Some(&modes),
                    &CouplingConfig::length(),
                    PesLabel::Nrqed,
                )
                .unwrap()
            },
            PesLabel::Nrqed,
        );
        let qm_model = mmqed_core::popes::renormalized_h2_model(&model, &modes).unwrap();
        let qm = cached_scan(
            &format!("h2_qm{np}_desk"),
            || {
                pes_scan(
                    &grid,
                    &r,
                    &qm_model,
                    1,
                    None,
                    &CouplingConfig::length(),
                    PesLabel::Qm,
                )
                .unwrap()
            },
            PesLabel::Qm,
        );
        for (tag, curve, mu) in [("nrqed", &nrqed, model.mu_n()), ("qm", &qm, qm_model.mu_n())] {
            let e = curve.energies();
            let m = e
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            let d_e = dissociation_energy(curve).unwrap();
            let fit = morse_fit(curve, curve.r()[m], d_e, e[m], mu, None).unwrap();
            writeln!(
                report,
                "np {np} {tag}: d_e {d_e:.6}  a {:.5}  omega_e {:.7}",
                fit.a, fit.omega_e
            )
            .unwrap();
        }
        println!("np {np} done at {:?}", t0.elapsed());
    }
    println!("{report}");
}

#[test]
fn probe_dissoc_strength() {
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes = base
        .truncated(30)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    let dip = h2_dipole(&grid);
    for r in [1.9f64, 9.0] {
        let h = h2_electronic_hamiltonian(r, &grid, &model).unwrap();
        let mb = eigensolve_matter(&h, &grid, 12, &dip).unwrap();
        let sp = mb.spectrum();
        let gaps: Vec<String> = (1..6)
            .map(|m| format!("{:.4}", sp.energy(m) - sp.energy(0)))
            .collect();
        println!("R {r}: gaps {}", gaps.join(" "));
        for n_s in [3usize, 4, 6, 8, 10, 12] {
            let mut raw = 0.0;
            let mut net = 0.0;
            for m in 1..n_s {
                let mu2 = sp.dipole(0, m).powi(2);
                raw += mu2;
                let delta = sp.energy(m) - sp.energy(0);
                let mut f = 0.0;
                for a in 0..modes.n_modes() {
                    let w = modes.frequencies()[a];
                    let l = modes.couplings()[a];
                    f += 0.5 * l * l * delta / (delta + w);
                }
                net += mu2 * f;
            }
            println!("  R {r} n_s {n_s}: raw {raw:.6}  net {net:.6e}");
        }
    }
}

fn cg_resolvent(
    h: &mmqed_core::linalg::SparseSymmetric,
    shift: f64,
    b: &[f64],
    psi0: &[f64],
) -> (f64, f64) {
    use mmqed_core::linalg::SymOp;
    let n = b.len();
    let dot = |a: &[f64], c: &[f64]| -> f64 { a.iter().zip(c).map(|(x, y)| x * y).sum() };
    let nrm = dot(psi0, psi0).sqrt();
    let unit: Vec<f64> = psi0.iter().map(|c| c / nrm).collect();
    let deflate = |v: &mut [f64]| {
        let c: f64 = v.iter().zip(&unit).map(|(x, y)| x * y).sum();
        for (vi, pi) in v.iter_mut().zip(&unit) {
            *vi -= c * pi;
        }
    };
    let diag: Vec<f64> = h.diagonal().iter().map(|d| (d + shift).max(1e-6)).collect();
    let mut bp = b.to_vec();
    deflate(&mut bp);
    let bnorm = dot(&bp, &bp).sqrt();
    let mut y = vec![0.0; n];
    let mut r = bp.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    deflate(&mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut hp = vec![0.0; n];
    let mut relres = 1.0;
    for _ in 0..6000 {
        relres = dot(&r, &r).sqrt() / bnorm;
        if relres < 1e-11 {
            break;
        }
        deflate(&mut p);
        h.apply(&p, &mut hp);
        for i in 0..n {
            hp[i] += shift * p[i];
        }
        deflate(&mut hp);
        let php = dot(&p, &hp);
        if !(php > 0.0) {
            eprintln!("breakdown: php {php:.3e} rz {rz:.3e} relres {relres:.3e}");
            break;
        }
        let alpha = rz / php;
        for i in 0..n {
            y[i] += alpha * p[i];
            r[i] -= alpha * hp[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        deflate(&mut z);
        let rz2 = dot(&r, &z);
        let beta = rz2 / rz;
        rz = rz2;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (dot(&bp, &y), relres)
}

#[test]
fn probe_exact_second_order() {
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes = base
        .truncated(30)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    let dip = h2_dipole(&grid);
    let sum_l2: f64 = modes.couplings().iter().map(|l| l * l).sum();
    let mut nets = Vec::new();
    for r in [1.9f64, 9.0] {
        let t = std::time::Instant::now();
        let h = h2_electronic_hamiltonian(r, &grid, &model).unwrap();
        let mb = eigensolve_matter(&h, &grid, 1, &dip).unwrap();
        let e0 = mb.energies()[0];
        let psi = &mb.states()[0];
        {
            use mmqed_core::linalg::SymOp;
            let mut hv = vec![0.0; psi.len()];
            h.apply(psi, &mut hv);
            let res: f64 = hv
                .iter()
                .zip(psi)
                .map(|(hvi, pi)| (hvi - e0 * pi).powi(2))
                .sum::<f64>()
                .sqrt();
            let norm: f64 = psi.iter().map(|c| c * c).sum::<f64>().sqrt();
            println!("  eig residual {res:.3e}  norm {norm:.6}");
        }
        let nrm: f64 = psi.iter().map(|c| c * c).sum::<f64>().sqrt();
        let psi: Vec<f64> = psi.iter().map(|c| c / nrm).collect();
        let xpsi: Vec<f64> = psi.iter().zip(&dip).map(|(c, x)| c * x).collect();
        let mu00: f64 = psi.iter().zip(&xpsi).map(|(c, x)| c * x).sum::<f64>();
        let x2: f64 = xpsi.iter().map(|v| v * v).sum::<f64>();
        let dse = 0.5 * sum_l2 * x2;
        let mut bil = 0.0;
        let mut worst = 0.0f64;
        for a in 0..modes.n_modes() {
            let w = modes.frequencies()[a];
            let l = modes.couplings()[a];
            let (gf, relres) = cg_resolvent(&h, w - e0, &xpsi, &psi);
            worst = worst.max(relres);
            bil += l * l * (w / 2.0) * gf;
        }
        let net = dse - bil;
        nets.push(net);
        println!(
            "R {r}: mu00 {mu00:.2e}  <X^2> {x2:.6}  dse {dse:.6e}  bil {bil:.6e}  net {net:.6e}  worst relres {worst:.1e}  ({:?})",
            t.elapsed()
        );
    }
    println!(
        "exact 2nd-order D_e shift at lambda=0.0019: {:+.4e}",
        nets[1] - nets[0]
    );
}

#[test]
fn probe_degen_check() {
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let dip = h2_dipole(&grid);
    let h = h2_electronic_hamiltonian(9.0, &grid, &model).unwrap();
    for n_s in [3usize, 4, 6, 12] {
        let mb = eigensolve_matter(&h, &grid, n_s, &dip).unwrap();
        let sp = mb.spectrum();
        let es: Vec<String> = (0..n_s.min(6))
            .map(|m| format!("{:.6}", sp.energy(m)))
            .collect();
        let mus: Vec<String> = (1..n_s.min(6))
            .map(|m| format!("{:.4}", sp.dipole(0, m)))
            .collect();
        println!("n_s {n_s}: E {}  mu0m {}", es.join(" "), mus.join(" "));
    }
}

#[test]
fn probe_dissoc_coupled() {
    let t0 = std::time::Instant::now();
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let r = vec![1.9f64, 9.0];
    let bare = pes_scan(
        &grid,
        &r,
        &model,
        1,
        None,
        &CouplingConfig::length(),
        PesLabel::Nrqed,
    )
    .unwrap();
    let gap_bare = bare.energies()[1] - bare.energies()[0];
    println!("bare E(9)-E(1.9) {gap_bare:.8}  ({:?})", t0.elapsed());
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let modes = base
        .truncated(30)
        .unwrap()
        .with_uniform_coupling(0.0019)
        .unwrap();
    for n_s in [2usize, 3, 4, 5, 6] {
        let coupled = pes_scan(
            &grid,
            &r,
            &model,
            n_s,
            Some(&modes),
            &CouplingConfig::length(),
            PesLabel::Nrqed,
        )
        .unwrap();
        let gap = coupled.energies()[1] - coupled.energies()[0];
        println!(
            "n_s {n_s}: E(9)-E(1.9) {gap:.8}  shift {:+.3e}  per-R {:+.4e} {:+.4e}  ({:?})",
            gap - gap_bare,
            coupled.energies()[0] - bare.energies()[0],
            coupled.energies()[1] - bare.energies()[1],
            t0.elapsed()
        );
    }
}

#[test]
fn probe_desk_cavity() {
    let t0 = std::time::Instant::now();
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let r = vec![1.7f64, 1.9, 2.1, 8.0, 9.0];
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let bare = pes_scan(
        &grid,
        &r,
        &model,
        1,
        None,
        &CouplingConfig::length(),
        PesLabel::Nrqed,
    )
    .unwrap();
    println!(
        "bare: d_e {:.7}",
        dissociation_energy(&bare).unwrap()
    );
    for lambda in [0.0009f64, 0.0012, 0.0019] {
        let modes = base
            .truncated(30)
            .unwrap()
            .with_uniform_coupling(lambda)
            .unwrap();
        let curve = pes_scan(
            &grid,
            &r,
            &model,
            5,
            Some(&modes),
            &CouplingConfig::length(),
            PesLabel::Nrqed,
        )
        .unwrap();
        let d_e = dissociation_energy(&curve).unwrap();
        println!("lambda {lambda}: d_e {d_e:.7}  ({:?})", t0.elapsed());
    }
}

#[test]
fn probe_cavity_density() {
    let t0 = std::time::Instant::now();
    let model = H2Model::standard();
    let grid = Grid1D::centered(100, 0.35, Boundary::HardWall).unwrap();
    let base = ModeContinuum::sample_equidistant(0.01, 0.5, 200).unwrap();
    let h = h2_electronic_hamiltonian(1.9, &grid, &model).unwrap();
    let mb = eigensolve_matter(&h, &grid, 5, &h2_dipole(&grid)).unwrap();
    let spectrum = mb.spectrum();
    let bare = matter_density(&mb, 0).unwrap();
    let peak_at = bare
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    println!(
        "bare peak at x {:.3} value {:.6}",
        grid.point(peak_at),
        bare.values()[peak_at]
    );
    let fock = build_fock_basis(30).unwrap();
    for lambda in [0.0009f64, 0.0012, 0.0019] {
        let modes = base
            .truncated(30)
            .unwrap()
            .with_uniform_coupling(lambda)
            .unwrap();
        let hc =
            assemble_length_gauge(&spectrum, &modes, &fock, &CouplingConfig::length()).unwrap();
        let gs = ground_state(&hc, &fock, 5).unwrap();
        let coupled = density(&gs, &mb).unwrap();
        let delta: Vec<f64> = coupled
            .values()
            .iter()
            .zip(bare.values())
            .map(|(c, b)| c - b)
            .collect();
        let max = delta.iter().cloned().fold(f64::MIN, f64::max);
        let argmax = delta
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let dn = integrated_density_diff(&coupled, &bare).unwrap();
        println!(
            "lambda {lambda}: dn_peak {:.4e}  max_delta {max:.4e} at x {:.3}  int_dn {dn:.4e}  ({:?})",
            delta[peak_at],
            grid.point(argmax),
            t0.elapsed()
        );
    }
}
