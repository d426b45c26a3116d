fn main() {
    std::process::exit(liftsampler::cli::main_with_args(std::env::args_os()));
}
