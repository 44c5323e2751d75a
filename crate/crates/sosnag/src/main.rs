fn main() {
    std::process::exit(sosnag::dispatch(std::env::args_os()));
}
