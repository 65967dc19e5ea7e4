fn main() {
    std::process::exit(noisyevo::cli::main_with_args(std::env::args_os()));
}
