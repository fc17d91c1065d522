fn main() {
    std::process::exit(varlat::cli::run(std::env::args_os()));
}
