fn main() {
    std::process::exit(zeno_lab::cli::run(std::env::args_os()));
}
