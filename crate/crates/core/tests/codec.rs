use hqvq::codec::{
    blockify, decode_image, deblockify, encode_image, full_search_encode_image, load_pgm, psnr,
    save_pgm, BlockGeometry, ImageGray8, IndexStream,
};
use hqvq::encoder::choose_delta_hat;
use hqvq::train::train_codebook;
use hqvq::{Codebook, EncoderConfig, NeighborhoodTable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn textured(w: usize, h: usize, seed: u64) -> ImageGray8 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<i32> = (0..w * h).map(|_| rng.random_range(-6..=6)).collect();
    ImageGray8::from_fn(w, h, |x, y| {
        let base = if (x / 8 + y / 8) % 2 == 0 { 60 } else { 190 };
        (base + (x as i32 - y as i32) / 2 + noise[y * w + x]).clamp(0, 255) as u8
    })
    .unwrap()
}

#[test]
fn exact_codevector_image_is_lossless() {
    let cb = Codebook::from_rows([vec![0.0, 0.0], vec![10.0, 250.0], vec![128.0, 64.0]]).unwrap();
    let blocks = [0usize, 1, 2, 2, 1, 0, 1, 1];
    let vectors: Vec<&[f64]> = blocks.iter().map(|&i| cb.codevectors()[i].as_slice()).collect();
    let geom = BlockGeometry::default();
    let img = deblockify(&vectors, geom, 4, 4).unwrap();
    let delta_hat = cb.delta0();
    let table = NeighborhoodTable::build(&cb, delta_hat).unwrap();
    let (stream, stats) = encode_image(&img, geom, &cb, &table, &EncoderConfig::new(delta_hat)).unwrap();
    assert_eq!(stream.indices.iter().map(|&i| i as usize).collect::<Vec<_>>(), blocks);
    let out = decode_image(&stream, &cb).unwrap();
    assert_eq!(out, img);
    assert_eq!(psnr(&img, &out).unwrap(), f64::INFINITY);
    assert_eq!(stats.a, 1.0);
    assert!((stats.a + stats.b + stats.c - 1.0).abs() < 1e-12);
}

#[test]
fn hybrid_reconstruction_equals_full_search_reconstruction() {
    for (w, h, bw, bh, n, seed) in [
        (32, 32, 2, 1, 32, 1u64),
        (33, 17, 2, 2, 64, 2),
        (40, 24, 1, 1, 16, 3),
        (32, 16, 4, 1, 96, 4),
    ] {
        let img = textured(w, h, seed);
        let geom = BlockGeometry::new(bw, bh).unwrap();
        let samples = blockify(&img, geom);
        let cb = train_codebook(&samples, n, seed).unwrap();
        let delta_hat = choose_delta_hat(&cb, &samples, 90.0).unwrap();
        let table = NeighborhoodTable::build(&cb, delta_hat).unwrap();
        let cfg = EncoderConfig::new(delta_hat).with_seed(seed);
        let (stream, stats) = encode_image(&img, geom, &cb, &table, &cfg).unwrap();
        let baseline = full_search_encode_image(&img, geom, &cb).unwrap();
        assert_eq!(stream, baseline);
        assert_eq!(decode_image(&stream, &cb).unwrap(), decode_image(&baseline, &cb).unwrap());
        assert_eq!(stats.vectors, geom.block_count(w, h));
        assert_eq!(stats.path_sub1 + stats.path_sub2 + stats.path_fallback, stats.vectors);
        assert!((stats.a + stats.b + stats.c - 1.0).abs() < 1e-12);
    }
}

#[test]
fn decode_rejects_mismatched_codebook() {
    let img = textured(8, 8, 5);
    let geom = BlockGeometry::default();
    let cb = train_codebook(&blockify(&img, geom), 8, 0).unwrap();
    let stream = full_search_encode_image(&img, geom, &cb).unwrap();
    let other = train_codebook(&blockify(&img, geom), 4, 0).unwrap();
    assert!(decode_image(&stream, &other).is_err());
    let wide = Codebook::from_rows((0..8).map(|i| vec![i as f64; 3])).unwrap();
    assert!(decode_image(&stream, &wide).is_err());
}

#[test]
fn pgm_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("img.pgm");
    let img = textured(13, 7, 6);
    save_pgm(&img, &path).unwrap();
    assert_eq!(load_pgm(&path).unwrap(), img);
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), "P5\n13 7\n255\n".len() + 13 * 7);
}

#[test]
fn stream_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("img.vqix");
    let img = textured(10, 6, 7);
    let geom = BlockGeometry::default();
    let cb = train_codebook(&blockify(&img, geom), 8, 0).unwrap();
    let stream = full_search_encode_image(&img, geom, &cb).unwrap();
    stream.save(&path).unwrap();
    let back = IndexStream::load(&path).unwrap();
    assert_eq!(back, stream);
    assert_eq!(std::fs::read(&path).unwrap(), stream.to_bytes());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blockify_round_trip(
        w in 1usize..24, h in 1usize..24, bw in 1usize..5, bh in 1usize..5, seed in any::<u64>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let px: Vec<u8> = (0..w * h).map(|_| rng.random()).collect();
        let img = ImageGray8::new(w, h, px).unwrap();
        let geom = BlockGeometry::new(bw, bh).unwrap();
        let v = blockify(&img, geom);
        prop_assert_eq!(v.len(), geom.block_count(w, h));
        prop_assert_eq!(deblockify(&v, geom, w, h).unwrap(), img);
    }

    #[test]
    fn pgm_bytes_round_trip(w in 1usize..30, h in 1usize..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let px: Vec<u8> = (0..w * h).map(|_| rng.random()).collect();
        let img = ImageGray8::new(w, h, px).unwrap();
        let bytes = hqvq::codec::write_pgm(&img);
        prop_assert_eq!(hqvq::codec::parse_pgm(&bytes).unwrap(), img);
    }
}
