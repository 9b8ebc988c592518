fn main() {
    std::process::exit(siegel_hecke::cli::run_from_args(std::env::args_os()));
}
