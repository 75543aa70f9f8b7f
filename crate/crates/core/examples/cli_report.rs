//! Drives the command surface in-process and prints the text reports, the
//! same output `kz --format text ...` gives.

fn main() {
    let runs: [&[&str]; 4] = [
        &["eigen", "--n", "5"],
        &["verify", "--n", "4", "--rho", "-1", "--points", "0,(1,1),3", "--solution", "y1"],
        &["series", "--n", "4", "--rho", "-1", "--points", "0,1,2", "--pole", "1", "--order", "2"],
        &["monodromy", "--n", "4", "--rho", "-1", "--points", "0,1,2", "--pole", "2", "--radius", "0.4"],
    ];
    for args in runs {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = ["kz", "--format", "text"].into_iter().chain(args.iter().copied());
        let code = kz_core::cli::run(argv, &mut out, &mut err);
        print!("{}", String::from_utf8_lossy(&out));
        eprint!("{}", String::from_utf8_lossy(&err));
        println!("exit code {code}\n");
    }
}
