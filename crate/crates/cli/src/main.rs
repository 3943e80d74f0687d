fn main() {
    std::process::exit(xyep_cli::run(std::env::args_os()));
}
