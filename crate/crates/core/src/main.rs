fn main() {
    std::process::exit(ppm::cli::run(std::env::args_os()));
}
