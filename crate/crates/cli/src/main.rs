fn main() {
    std::process::exit(learncurve_cli::run(std::env::args_os()));
}
