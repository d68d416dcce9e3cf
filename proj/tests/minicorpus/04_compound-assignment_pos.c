void f(void)
{
    int x = 1;
    x += 2;
    x <<= 1;
}
